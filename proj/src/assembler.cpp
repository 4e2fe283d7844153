#include "solfuzz/assembler.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "solfuzz/isa.hpp"

namespace solfuzz {
namespace {

struct Line {
    size_t number;
    std::vector<std::string> tokens;  // mnemonic first, label markers removed
};

[[noreturn]] void err(size_t line, const std::string& msg) {
    throw AsmError("line " + std::to_string(line) + ": " + msg);
}

// Splits on whitespace and commas; spaces inside [...] are tolerated so
// "[r10 - 8]" and "[r10-8]" tokenize identically.
std::vector<std::string> tokenize(size_t line_no, const std::string& raw) {
    std::string line = raw;
    for (const char* c : {";", "#", "//"}) {
        auto p = line.find(c);
        if (p != std::string::npos) line.resize(p);
    }
    std::vector<std::string> out;
    std::string cur;
    bool bracket = false, quote = false;
    for (char ch : line) {
        if (quote) {
            cur += ch;
            if (ch == '"') quote = false;
            continue;
        }
        if (ch == '"') {
            cur += ch;
            quote = true;
        } else if (ch == '[') {
            bracket = true;
            cur += ch;
        } else if (ch == ']') {
            bracket = false;
            cur += ch;
        } else if ((ch == ' ' || ch == '\t' || ch == ',') && !bracket) {
            if (!cur.empty()) out.push_back(cur), cur.clear();
        } else if (ch != ' ' && ch != '\t') {
            cur += ch;
        } else if (bracket) {
            // swallow spaces inside brackets
        }
    }
    if (quote || bracket) err(line_no, "unterminated bracket or string");
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int64_t parse_int(size_t line, const std::string& tok, int64_t lo, int64_t hi) {
    bool neg = !tok.empty() && tok[0] == '-';
    std::string body = neg ? tok.substr(1) : tok;
    int base = 10;
    if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
        base = 16;
        body = body.substr(2);
    }
    uint64_t mag = 0;
    auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), mag, base);
    if (ec != std::errc() || p != body.data() + body.size())
        err(line, "bad number '" + tok + "'");
    int64_t v = neg ? -int64_t(mag) : int64_t(mag);
    if (!neg && mag > uint64_t(INT64_MAX)) v = int64_t(mag);  // allow full u64 as bits
    if (v < lo || (hi != INT64_MAX && v > hi))
        err(line, "value '" + tok + "' out of range");
    return v;
}

uint8_t parse_reg(size_t line, const std::string& tok) {
    if (tok.size() < 2 || tok[0] != 'r') err(line, "expected register, got '" + tok + "'");
    int64_t n = parse_int(line, tok.substr(1), 0, 10);
    return uint8_t(n);
}

// "[rN+off]" / "[rN-off]" / "[rN]"
std::pair<uint8_t, int16_t> parse_mem(size_t line, const std::string& tok) {
    if (tok.size() < 3 || tok.front() != '[' || tok.back() != ']')
        err(line, "expected [reg+off], got '" + tok + "'");
    std::string inner = tok.substr(1, tok.size() - 2);
    size_t sep = inner.find_first_of("+-", 1);
    std::string reg = sep == std::string::npos ? inner : inner.substr(0, sep);
    int64_t off = 0;
    if (sep != std::string::npos) {
        std::string rest = inner.substr(sep);
        if (rest[0] == '+') rest = rest.substr(1);
        off = parse_int(line, rest, INT16_MIN, INT16_MAX);
    }
    return {parse_reg(line, reg), int16_t(off)};
}

bool is_reg(const std::string& tok) {
    if (tok.size() < 2 || tok.size() > 3 || tok[0] != 'r') return false;
    for (size_t i = 1; i < tok.size(); i++)
        if (!isdigit((unsigned char)tok[i])) return false;
    return true;
}

uint64_t parse_lddw_imm(size_t line, const std::string& tok) {
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
        std::string s = tok.substr(1, tok.size() - 2);
        if (s.size() > 8) err(line, "string literal longer than 8 bytes");
        uint64_t v = 0;
        for (size_t i = 0; i < s.size(); i++) v |= uint64_t(uint8_t(s[i])) << (8 * i);
        return v;
    }
    return uint64_t(parse_int(line, tok, INT64_MIN, INT64_MAX));
}

const std::map<std::string, uint8_t> kAluOps = {
    {"add64", ALU_ADD}, {"sub64", ALU_SUB}, {"mul64", ALU_MUL}, {"div64", ALU_DIV},
    {"or64", ALU_OR},   {"and64", ALU_AND}, {"lsh64", ALU_LSH}, {"rsh64", ALU_RSH},
    {"mod64", ALU_MOD}, {"xor64", ALU_XOR}, {"mov64", ALU_MOV}, {"arsh64", ALU_ARSH},
};
const std::map<std::string, uint8_t> kJmpOps = {
    {"jeq", JMP_JEQ},   {"jgt", JMP_JGT},   {"jge", JMP_JGE},   {"jlt", JMP_JLT},
    {"jle", JMP_JLE},   {"jne", JMP_JNE},   {"jsgt", JMP_JSGT}, {"jsge", JMP_JSGE},
    {"jslt", JMP_JSLT}, {"jsle", JMP_JSLE},
};
const std::map<std::string, uint8_t> kSizes = {
    {"b", SZ_B}, {"h", SZ_H}, {"w", SZ_W}, {"dw", SZ_DW}};

// pcs occupied by an instruction line (lddw takes two slots)
uint64_t slot_count(const std::string& mnemonic) { return mnemonic == "lddw" ? 2 : 1; }

}  // namespace

AssembledProgram assemble(const std::string& source) {
    AssembledProgram out;
    out.syscalls = SyscallTable::defaults();

    // pass 1: labels, directives, token streams
    std::vector<Line> lines;
    uint64_t pc = 0;
    std::istringstream ss(source);
    std::string raw;
    for (size_t n = 1; std::getline(ss, raw); n++) {
        auto toks = tokenize(n, raw);
        if (toks.empty()) continue;
        while (!toks.empty() && toks[0].back() == ':') {
            std::string label = toks[0].substr(0, toks[0].size() - 1);
            if (label.empty()) err(n, "empty label");
            if (out.labels.count(label)) err(n, "duplicate label '" + label + "'");
            out.labels[label] = pc;
            toks.erase(toks.begin());
        }
        if (toks.empty()) continue;
        if (toks[0] == ".syscall") {
            if (toks.size() != 3) err(n, ".syscall wants <name> <id>");
            out.syscalls.add(uint32_t(parse_int(n, toks[2], 0, UINT32_MAX)), toks[1]);
            continue;
        }
        lines.push_back({n, toks});
        pc += slot_count(toks[0]);
    }

    // pass 2: encode
    auto target_of = [&](size_t n, const std::string& tok, uint64_t at) -> int64_t {
        // "+N"/"-N" is a raw relative offset, as the disassembler prints
        if (!tok.empty() && (tok[0] == '+' || (tok[0] == '-' && tok.size() > 1 &&
                                               isdigit((unsigned char)tok[1]))))
            return parse_int(n, tok[0] == '+' ? tok.substr(1) : tok, INT16_MIN, INT16_MAX);
        auto it = out.labels.find(tok);
        if (it == out.labels.end()) err(n, "unknown label '" + tok + "'");
        int64_t rel = int64_t(it->second) - int64_t(at) - 1;
        if (rel < INT16_MIN || rel > INT16_MAX) err(n, "jump to '" + tok + "' out of range");
        return rel;
    };
    pc = 0;
    for (const auto& ln : lines) {
        const auto& t = ln.tokens;
        const std::string& m = t[0];
        size_t n = ln.number;
        auto want = [&](size_t c) {
            if (t.size() != c + 1) err(n, m + " wants " + std::to_string(c) + " operands");
        };
        Insn ins{};
        if (auto it = kAluOps.find(m); it != kAluOps.end()) {
            want(2);
            ins.dst = parse_reg(n, t[1]);
            if (is_reg(t[2])) {
                ins.opcode = uint8_t(CLS_ALU64 | SRC_REG | it->second);
                ins.src = parse_reg(n, t[2]);
            } else {
                ins.opcode = uint8_t(CLS_ALU64 | SRC_IMM | it->second);
                ins.imm = int32_t(parse_int(n, t[2], INT32_MIN, int64_t(UINT32_MAX)));
            }
            append_insn(out.text, ins);
        } else if (m == "neg64") {
            want(1);
            ins.opcode = uint8_t(CLS_ALU64 | SRC_IMM | ALU_NEG);
            ins.dst = parse_reg(n, t[1]);
            append_insn(out.text, ins);
        } else if (m == "lddw") {
            want(2);
            append_lddw(out.text, parse_reg(n, t[1]), parse_lddw_imm(n, t[2]));
        } else if (m.rfind("ldx", 0) == 0) {
            want(2);
            auto sz = kSizes.find(m.substr(3));
            if (sz == kSizes.end()) err(n, "unknown mnemonic '" + m + "'");
            ins.opcode = uint8_t(CLS_LDX | sz->second | MODE_MEM);
            ins.dst = parse_reg(n, t[1]);
            auto [r, off] = parse_mem(n, t[2]);
            ins.src = r;
            ins.offset = off;
            append_insn(out.text, ins);
        } else if (m.rfind("stx", 0) == 0) {
            want(2);
            auto sz = kSizes.find(m.substr(3));
            if (sz == kSizes.end()) err(n, "unknown mnemonic '" + m + "'");
            ins.opcode = uint8_t(CLS_STX | sz->second | MODE_MEM);
            auto [r, off] = parse_mem(n, t[1]);
            ins.dst = r;
            ins.offset = off;
            ins.src = parse_reg(n, t[2]);
            append_insn(out.text, ins);
        } else if (m.rfind("st", 0) == 0 && kSizes.count(m.substr(2))) {
            want(2);
            ins.opcode = uint8_t(CLS_ST | kSizes.at(m.substr(2)) | MODE_MEM);
            auto [r, off] = parse_mem(n, t[1]);
            ins.dst = r;
            ins.offset = off;
            ins.imm = int32_t(parse_int(n, t[2], INT32_MIN, int64_t(UINT32_MAX)));
            append_insn(out.text, ins);
        } else if (m == "ja") {
            want(1);
            ins.opcode = OP_JA;
            ins.offset = int16_t(target_of(n, t[1], pc));
            append_insn(out.text, ins);
        } else if (auto jt = kJmpOps.find(m); jt != kJmpOps.end()) {
            want(3);
            ins.dst = parse_reg(n, t[1]);
            if (is_reg(t[2])) {
                ins.opcode = uint8_t(CLS_JMP | SRC_REG | jt->second);
                ins.src = parse_reg(n, t[2]);
            } else {
                ins.opcode = uint8_t(CLS_JMP | SRC_IMM | jt->second);
                ins.imm = int32_t(parse_int(n, t[2], INT32_MIN, int64_t(UINT32_MAX)));
            }
            ins.offset = int16_t(target_of(n, t[3], pc));
            append_insn(out.text, ins);
        } else if (m == "call") {
            want(1);
            ins.opcode = OP_CALL;
            if (out.labels.count(t[1])) {
                ins.src = CALL_SRC_LOCAL;
                int64_t rel = int64_t(out.labels[t[1]]) - int64_t(pc) - 1;
                ins.imm = int32_t(rel);
            } else if (out.syscalls.by_name.count(t[1])) {
                ins.src = CALL_SRC_SYSCALL;
                ins.imm = int32_t(out.syscalls.by_name.at(t[1]));
            } else {
                err(n, "call target '" + t[1] + "' is neither a label nor a syscall");
            }
            append_insn(out.text, ins);
        } else if (m == "exit") {
            want(0);
            ins.opcode = OP_EXIT;
            append_insn(out.text, ins);
        } else {
            err(n, "unknown mnemonic '" + m + "'");
        }
        pc += slot_count(m);
    }
    return out;
}

}  // namespace solfuzz
