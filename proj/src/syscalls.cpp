// Syscall dispatch plus PDA derivation. Guest-side ABI:
//   seed slice        : { u64 ptr, u64 len }            (16 bytes)
//   signer seed set   : { u64 slices_ptr, u64 count }   (16 bytes)
//   cpi account meta  : { u64 pubkey_ptr, u8 signer, u8 writable, 6 pad }
//   cpi instruction   : { u64 pid_ptr, u64 metas_ptr, u64 metas_len,
//                         u64 data_ptr, u64 data_len }  (40 bytes)
#include <algorithm>

#include "solfuzz/pda.hpp"
#include "solfuzz/sha256.hpp"
#include "solfuzz/vm.hpp"

namespace solfuzz {

Pubkey pda_derive(const std::vector<Bytes>& seeds, const Pubkey& program_id) {
    std::vector<Bytes> parts = seeds;
    parts.emplace_back(program_id.begin(), program_id.end());
    static const char* marker = "ProgramDerivedAddress";
    parts.emplace_back(marker, marker + std::strlen(marker));
    auto h = sha256_concat(parts);
    Pubkey k;
    std::copy(h.begin(), h.end(), k.begin());
    return k;
}

bool pda_on_curve(const Pubkey& key) { return sha256(key.data(), key.size())[0] < 128; }

std::optional<Pubkey> pda_create(const std::vector<Bytes>& seeds, const Pubkey& program_id) {
    Pubkey k = pda_derive(seeds, program_id);
    if (pda_on_curve(k)) return std::nullopt;
    return k;
}

std::optional<std::pair<Pubkey, uint8_t>> pda_try_find(const std::vector<Bytes>& seeds,
                                                       const Pubkey& program_id) {
    std::vector<Bytes> with_bump = seeds;
    with_bump.emplace_back(1, 0);
    for (int bump = 255; bump >= 0; bump--) {
        with_bump.back()[0] = uint8_t(bump);
        Pubkey k = pda_derive(with_bump, program_id);
        if (!pda_on_curve(k)) return std::make_pair(k, uint8_t(bump));
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

struct SyscallCtx {
    Vm& vm;
    uint64_t pc;

    std::optional<ExecutionOutcome> fault(uint64_t addr) {
        return ExecutionOutcome::aborted(AbortReason::MemFault, pc, addr);
    }
    bool read(uint64_t addr, uint64_t len, Bytes& out) {
        out.resize(len);
        return len == 0 || vm.peek(addr, len, out.data());
    }
    bool write(uint64_t addr, const uint8_t* data, uint64_t len) {
        uint8_t* p = const_cast<uint8_t*>(vm.translate(addr, len));
        if (!p) return false;
        std::memcpy(p, data, len);
        return true;
    }
    // Reads `count` seed slices at `addr` into seeds; empty optional on fault,
    // false payload when limits are exceeded (soft error, r0 = 1).
    std::optional<bool> read_seed_slices(uint64_t addr, uint64_t count, std::vector<Bytes>& seeds,
                                         std::vector<std::pair<uint64_t, uint64_t>>& slices) {
        if (count > PDA_MAX_SEEDS) return false;
        for (uint64_t i = 0; i < count; i++) {
            uint8_t entry[16];
            if (!vm.peek(addr + i * 16, 16, entry)) return std::nullopt;
            uint64_t ptr = read_le64(entry), len = read_le64(entry + 8);
            if (len > PDA_MAX_SEED_LEN) return false;
            Bytes seed;
            if (!read(ptr, len, seed)) return std::nullopt;
            seeds.push_back(std::move(seed));
            slices.emplace_back(ptr, len);
        }
        return true;
    }
};

std::optional<ExecutionOutcome> Vm::syscall_pda(uint64_t pc, uint32_t id) {
    SyscallCtx c{*this, pc};
    std::vector<Bytes> seeds;
    std::vector<std::pair<uint64_t, uint64_t>> slices;
    auto ok = c.read_seed_slices(regs_[1], regs_[2], seeds, slices);
    if (!ok) return c.fault(regs_[1]);
    Pubkey pid;
    if (!peek(regs_[3], 32, pid.data())) return c.fault(regs_[3]);
    if (!*ok) {
        regs_[0] = 1;
        return std::nullopt;
    }

    Pubkey key;
    if (id == SC_CREATE_PROGRAM_ADDRESS) {
        auto r = pda_create(seeds, pid);
        if (!r) {
            regs_[0] = 1;
            return std::nullopt;
        }
        key = *r;
    } else {
        auto r = pda_try_find(seeds, pid);
        if (!r) {
            regs_[0] = 1;
            return std::nullopt;
        }
        key = r->first;
        uint8_t bump = r->second;
        if (!c.write(regs_[5], &bump, 1)) return c.fault(regs_[5]);
    }
    if (!c.write(regs_[4], key.data(), 32)) return c.fault(regs_[4]);
    regs_[0] = 0;
    for (auto* h : hooks_) h->on_pda_result(*this, pc, regs_[4], slices);
    return std::nullopt;
}

std::optional<ExecutionOutcome> Vm::syscall_invoke(uint64_t pc) {
    SyscallCtx c{*this, pc};
    auto invalid = [&] { return ExecutionOutcome::program_error(ErrorReason::InvalidCpi, 0, pc); };

    uint8_t hdr[40];
    if (!peek(regs_[1], 40, hdr)) return c.fault(regs_[1]);
    const uint64_t pid_ptr = read_le64(hdr), metas_ptr = read_le64(hdr + 8), metas_len = read_le64(hdr + 16);
    const uint64_t data_ptr = read_le64(hdr + 24), data_len = read_le64(hdr + 32);
    if (metas_len > 16 || data_len > 1024) return invalid();

    CpiRequest req;
    if (!peek(pid_ptr, 32, req.target.data())) return c.fault(pid_ptr);
    for (uint64_t i = 0; i < metas_len; i++) {
        uint8_t m[16];
        if (!peek(metas_ptr + i * 16, 16, m)) return c.fault(metas_ptr);
        CpiAccountMeta meta;
        uint64_t kp = read_le64(m);
        if (!peek(kp, 32, meta.pubkey.data())) return c.fault(kp);
        meta.is_signer = m[8] != 0;
        meta.is_writable = m[9] != 0;
        req.metas.push_back(meta);
    }
    if (data_len && !c.read(data_ptr, data_len, req.data)) return c.fault(data_ptr);

    // signer seed sets escalate the caller's PDAs to signers in the callee
    const uint64_t signers_ptr = regs_[2], signers_len = regs_[3];
    if (signers_len > 4) return invalid();
    const Pubkey caller_pid = env_->current_program_id();
    for (uint64_t i = 0; i < signers_len; i++) {
        uint8_t entry[16];
        if (!peek(signers_ptr + i * 16, 16, entry)) return c.fault(signers_ptr);
        std::vector<Bytes> seeds;
        std::vector<std::pair<uint64_t, uint64_t>> slices;
        auto ok = c.read_seed_slices(read_le64(entry), read_le64(entry + 8), seeds, slices);
        if (!ok) return c.fault(read_le64(entry));
        if (!*ok) return invalid();
        auto pda = pda_create(seeds, caller_pid);
        if (!pda) return invalid();
        req.signer_pdas.push_back(*pda);
    }

    for (auto* h : hooks_) h->on_cpi(*this, pc, req);
    if (cpi_depth_ >= MAX_CPI_DEPTH) return ExecutionOutcome::aborted(AbortReason::CpiDepthExceeded, pc);

    ExecutionOutcome nested = env_->cpi_invoke(req, *this);
    switch (nested.kind) {
        case OutcomeKind::Success:
            regs_[0] = 0;
            return std::nullopt;
        case OutcomeKind::ProgramError:
            return ExecutionOutcome::program_error(ErrorReason::CpiFailed, nested.code, pc);
        default:
            return nested;  // aborts and oracle halts propagate unchanged
    }
}

std::optional<ExecutionOutcome> Vm::dispatch_syscall(uint64_t pc, uint32_t id) {
    SyscallCtx c{*this, pc};
    switch (id) {
        case SC_LOG: {
            uint64_t len = std::min<uint64_t>(regs_[2], 512);
            Bytes msg;
            if (!c.read(regs_[1], len, msg)) return c.fault(regs_[1]);
            env_->log(std::string(msg.begin(), msg.end()));
            regs_[0] = 0;
            return std::nullopt;
        }
        case SC_GET_CLOCK_SYSVAR: {
            auto info = env_->clock_info();
            uint8_t buf[32];
            for (int i = 0; i < 4; i++) write_le64(buf + i * 8, info[i]);
            if (!c.write(regs_[1], buf, 32)) return c.fault(regs_[1]);
            regs_[0] = 0;
            return std::nullopt;
        }
        case SC_LOAD_INSTRUCTION_AT: {
            Bytes rec;
            if (!env_->load_instruction_record(regs_[1], rec)) {
                regs_[0] = uint64_t(-1);
                return std::nullopt;
            }
            uint64_t n = std::min<uint64_t>(rec.size(), regs_[3]);
            if (n && !c.write(regs_[2], rec.data(), n)) return c.fault(regs_[2]);
            regs_[0] = rec.size();
            return std::nullopt;
        }
        case SC_CREATE_PROGRAM_ADDRESS:
        case SC_TRY_FIND_PROGRAM_ADDRESS:
            return syscall_pda(pc, id);
        case SC_INVOKE_SIGNED_RUST:
        case SC_INVOKE_SIGNED_C:
            return syscall_invoke(pc);
        default:
            // ids added through a custom table have no host behavior: no-op
            regs_[0] = 0;
            return std::nullopt;
    }
}

}  // namespace solfuzz
