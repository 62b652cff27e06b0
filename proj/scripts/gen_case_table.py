#!/usr/bin/env python3
"""Regenerates include/streamgen/case_table.inc from the Python unicodedata
database. Only one-to-one (simple) case mappings are emitted; multi-codepoint
expansions such as U+00DF -> "SS" are skipped."""

import sys
import unicodedata

def mappings(convert):
    out = []
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        ch = chr(cp)
        mapped = convert(ch)
        if len(mapped) == 1 and mapped != ch:
            out.append((cp, ord(mapped[0])))
    return out


def emit(f, name, pairs):
    f.write(f"inline constexpr CaseMapping {name}[] = {{\n")
    for i in range(0, len(pairs), 4):
        row = ", ".join(f"{{0x{a:05X}, 0x{b:05X}}}" for a, b in pairs[i : i + 4])
        f.write(f"    {row},\n")
    f.write("};\n\n")


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else "include/streamgen/case_table.inc"
    lower = mappings(str.lower)
    upper = mappings(str.upper)
    with open(path, "w") as f:
        f.write("// Generated by scripts/gen_case_table.py (Unicode %s). Do not edit.\n"
                % unicodedata.unidata_version)
        f.write("// clang-format off\n\n")
        emit(f, "kToLower", lower)
        emit(f, "kToUpper", upper)
        f.write("// clang-format on\n")
    print(f"{path}: {len(lower)} lower, {len(upper)} upper mappings")


if __name__ == "__main__":
    main()
