// Program container and loaders: flat little-endian instruction blobs and a
// minimal ELF64 reader that extracts .text verbatim (no relocations).
#pragma once

#include <map>
#include <set>

#include "solfuzz/isa.hpp"

namespace solfuzz {

struct SyscallTable {
    std::map<uint32_t, std::string> by_id;
    std::map<std::string, uint32_t> by_name;

    void add(uint32_t id, const std::string& name) {
        by_id[id] = name;
        by_name[name] = id;
    }
    bool has_id(uint32_t id) const { return by_id.count(id) != 0; }
    std::string name(uint32_t id) const {
        auto it = by_id.find(id);
        return it == by_id.end() ? "" : it->second;
    }

    static SyscallTable defaults();
    // Parses "<u32 immediate> <name>" lines; '#' starts a comment.
    static SyscallTable parse(const std::string& text);
};

// well-known ids of the default table
constexpr uint32_t SC_LOG = 1;
constexpr uint32_t SC_INVOKE_SIGNED_RUST = 2;
constexpr uint32_t SC_INVOKE_SIGNED_C = 3;
constexpr uint32_t SC_CREATE_PROGRAM_ADDRESS = 4;
constexpr uint32_t SC_TRY_FIND_PROGRAM_ADDRESS = 5;
constexpr uint32_t SC_GET_CLOCK_SYSVAR = 6;
constexpr uint32_t SC_LOAD_INSTRUCTION_AT = 7;

enum class ProgramFormat { Flat, Elf };

struct EbpfProgram {
    Bytes text;                    // raw instruction bytes, len % 8 == 0
    std::vector<Insn> insns;       // predecoded, one per 8-byte slot
    std::vector<bool> insn_start;  // false for LDDW continuation slots
    SyscallTable syscalls;
    std::set<uint64_t> local_functions;  // CALL-local targets
    std::array<uint8_t, 32> hash{};      // sha256(text)

    size_t insn_count() const { return insns.size(); }
    uint64_t imm64_at(uint64_t pc) const {  // LDDW payload
        return (uint64_t(uint32_t(insns[pc].imm))) | (uint64_t(uint32_t(insns[pc + 1].imm)) << 32);
    }
};

// Validates encoding, register ranges, jump targets and syscall immediates.
// Throws LoadError with a pc-tagged message on the first violation.
EbpfProgram load_program(const Bytes& blob, ProgramFormat format,
                         const SyscallTable& table = SyscallTable::defaults());

// Extracts the .text section of a minimal ELF64 image.
Bytes elf_extract_text(const Bytes& image);

}  // namespace solfuzz
