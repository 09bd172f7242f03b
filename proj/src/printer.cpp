#include "michelstat/printer.hpp"

namespace michelstat {

namespace {

void print_seq(std::string& out, const instr_seq& code, int indent);

std::string pad(int indent) { return std::string(size_t(indent) * 2, ' '); }

void print_instr(std::string& out, const instr& i, int indent) {
    out += pad(indent);
    out += opcode_name(i.op);
    switch (i.op) {
    case opcode::op_drop:
    case opcode::op_dup:
        if (i.n != 1) out += " " + std::to_string(i.n);
        break;
    case opcode::op_dig:
    case opcode::op_dug:
        out += " " + std::to_string(i.n);
        break;
    case opcode::op_dip:
        if (i.n != 1) out += " " + std::to_string(i.n);
        out += "\n";
        print_seq(out, i.blocks[0], indent);
        return;
    case opcode::op_push:
        out += " " + i.ty->to_string() + " " + i.lit->to_string();
        break;
    case opcode::op_none:
    case opcode::op_left:
    case opcode::op_right:
    case opcode::op_nil:
    case opcode::op_empty_set:
    case opcode::op_contract:
        out += " " + i.ty->to_string();
        break;
    case opcode::op_empty_map:
        out += " " + i.ty->to_string() + " " + i.ty2->to_string();
        break;
    case opcode::op_if:
    case opcode::op_if_none:
    case opcode::op_if_left:
    case opcode::op_if_cons:
        out += "\n";
        print_seq(out, i.blocks[0], indent);
        out += "\n";
        print_seq(out, i.blocks[1], indent);
        return;
    case opcode::op_loop:
    case opcode::op_loop_left:
    case opcode::op_iter:
    case opcode::op_map:
        out += "\n";
        print_seq(out, i.blocks[0], indent);
        return;
    default: break;
    }
}

void print_seq(std::string& out, const instr_seq& code, int indent) {
    out += pad(indent) + "{";
    if (code.empty()) {
        out += "}";
        return;
    }
    out += "\n";
    for (size_t k = 0; k < code.size(); ++k) {
        print_instr(out, code[k], indent + 1);
        if (k + 1 < code.size()) out += ";";
        out += "\n";
    }
    out += pad(indent) + "}";
}

} // namespace

std::string to_source(const instr_seq& code, int indent) {
    std::string out;
    print_seq(out, code, indent);
    return out;
}

std::string to_source(const script& sc) {
    std::string out;
    out += "storage " + sc.storage_ty->to_string() + ";\n";
    out += "parameter " + sc.param_ty->to_string() + ";\n";
    out += "code\n";
    print_seq(out, sc.code, 1);
    out += ";\n";
    return out;
}

} // namespace michelstat
