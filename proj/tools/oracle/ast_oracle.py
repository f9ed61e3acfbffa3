#!/usr/bin/env python3
#  Copyright 2026 The ABCD analyzer authors.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
"""Reference tree dumps built on CPython's own ``ast`` module.

The analyzer's node set differs from CPython's in a few documented ways, so
this script normalises the CPython tree before printing it:

  * expression-context markers (Load/Store/Del) are dropped;
  * the ``arguments`` container is flattened into FunctionDef: parameters,
    then default values;
  * ``arg`` becomes Parameter, ``keyword`` becomes Keyword, ``Expr`` becomes
    ExprStmt, ``JoinedStr`` becomes FormattedString and ``FormattedValue``
    becomes FormatHole;
  * string constants become StringLiteral, every other constant Constant;
  * operator nodes (Add, And, Not, Eq, ...) become an ``op`` attribute of the
    owning node, one attribute per operator;
  * ``Import``/``ImportFrom`` statements are dropped together with their
    ``alias`` children;
  * location metadata, ``Constant.kind`` and ``type_comment`` are dropped.

Anything outside the analyzer's grammar is reported as unsupported.

Usage:
  ast_oracle.py dump FILE...            print "<count>\\t<sexpr>" per file
  ast_oracle.py golden OUT_DIR FILE...  write OUT_DIR/<stem>.sexpr and a
                                        counts.tsv summary
  ast_oracle.py check DIR               compare DIR/*.vp against DIR/*.sexpr
"""

import ast
import json
import os
import re
import sys

OPS = {
    ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/",
    ast.FloorDiv: "//", ast.Mod: "%", ast.Pow: "**", ast.MatMult: "@",
    ast.LShift: "<<", ast.RShift: ">>", ast.BitOr: "|", ast.BitXor: "^",
    ast.BitAnd: "&", ast.And: "and", ast.Or: "or", ast.Not: "not",
    ast.USub: "-", ast.UAdd: "+", ast.Invert: "~", ast.Eq: "==",
    ast.NotEq: "!=", ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">", ast.GtE: ">=",
    ast.Is: "is", ast.IsNot: "is not", ast.In: "in", ast.NotIn: "not in",
}

BARE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[-+*/%@<>=!&|^~]+")


class Unsupported(Exception):
    pass


def quote(text):
    out = ['"']
    for ch in text:
        code = ord(ch)
        if 0xD800 <= code <= 0xDFFF:
            raise Unsupported("surrogate code point in string")
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif code < 0x20 or code == 0x7F:
            out.append("\\u%04x" % code)
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def symbol(text):
    return text if BARE.fullmatch(text) else quote(text)


def constant(value):
    if value is None or isinstance(value, bool):
        return repr(value)
    if value is Ellipsis:
        return "Ellipsis"
    if isinstance(value, int):
        if not -(2**63) <= value < 2**63:
            raise Unsupported("integer literal out of range")
        return str(value)
    if isinstance(value, float):
        return repr(value)
    raise Unsupported("constant of type %s" % type(value).__name__)


class Node:
    def __init__(self, kind):
        self.kind = kind
        self.attrs = []
        self.children = []

    def sexpr(self):
        parts = [self.kind]
        parts += ["%s=%s" % (name, value) for name, value in self.attrs]
        parts += [child.sexpr() for child in self.children]
        return "(" + " ".join(parts) + ")"

    def count(self):
        return 1 + sum(child.count() for child in self.children)


def op(node):
    return OPS[type(node)]


def convert_joined(values):
    out = Node("FormattedString")
    for value in values:
        if isinstance(value, ast.Constant):
            lit = Node("StringLiteral")
            lit.attrs.append(("value", quote(value.value)))
            out.children.append(lit)
        elif isinstance(value, ast.FormattedValue):
            hole = Node("FormatHole")
            if value.conversion != -1:
                hole.attrs.append(("conversion", chr(value.conversion)))
            hole.children.append(expr(value.value))
            if value.format_spec is not None:
                hole.children.append(convert_joined(value.format_spec.values))
            out.children.append(hole)
        else:
            raise Unsupported(type(value).__name__)
    return out


def expr(e):
    if isinstance(e, ast.Name):
        n = Node("Name")
        n.attrs.append(("id", symbol(e.id)))
        return n
    if isinstance(e, ast.Constant):
        if isinstance(e.value, str):
            n = Node("StringLiteral")
            n.attrs.append(("value", quote(e.value)))
        else:
            n = Node("Constant")
            n.attrs.append(("value", constant(e.value)))
        return n
    if isinstance(e, ast.JoinedStr):
        return convert_joined(e.values)
    if isinstance(e, ast.Attribute):
        n = Node("Attribute")
        n.attrs.append(("attr", symbol(e.attr)))
        n.children.append(expr(e.value))
        return n
    if isinstance(e, ast.Call):
        n = Node("Call")
        n.children.append(expr(e.func))
        for a in e.args:
            if isinstance(a, ast.Starred):
                raise Unsupported("starred argument")
            n.children.append(expr(a))
        for k in e.keywords:
            if k.arg is None:
                raise Unsupported("** argument")
            kw = Node("Keyword")
            kw.attrs.append(("arg", symbol(k.arg)))
            kw.children.append(expr(k.value))
            n.children.append(kw)
        return n
    if isinstance(e, ast.Subscript):
        n = Node("Subscript")
        n.children.append(expr(e.value))
        n.children.append(expr(e.slice))
        return n
    if isinstance(e, ast.Slice):
        n = Node("Slice")
        for part in (e.lower, e.upper, e.step):
            if part is not None:
                n.children.append(expr(part))
        return n
    if isinstance(e, (ast.List, ast.Tuple)):
        n = Node("List" if isinstance(e, ast.List) else "Tuple")
        for elt in e.elts:
            if isinstance(elt, ast.Starred):
                raise Unsupported("starred element")
            n.children.append(expr(elt))
        return n
    if isinstance(e, ast.Dict):
        n = Node("Dict")
        for k in e.keys:
            if k is None:
                raise Unsupported("** in dict display")
            n.children.append(expr(k))
        for v in e.values:
            n.children.append(expr(v))
        return n
    if isinstance(e, ast.BinOp):
        n = Node("BinOp")
        n.attrs.append(("op", symbol(op(e.op))))
        n.children += [expr(e.left), expr(e.right)]
        return n
    if isinstance(e, ast.BoolOp):
        n = Node("BoolOp")
        n.attrs.append(("op", symbol(op(e.op))))
        n.children += [expr(v) for v in e.values]
        return n
    if isinstance(e, ast.UnaryOp):
        n = Node("UnaryOp")
        n.attrs.append(("op", symbol(op(e.op))))
        n.children.append(expr(e.operand))
        return n
    if isinstance(e, ast.Compare):
        n = Node("Compare")
        for o in e.ops:
            n.attrs.append(("op", symbol(op(o))))
        n.children.append(expr(e.left))
        n.children += [expr(c) for c in e.comparators]
        return n
    raise Unsupported(type(e).__name__)


def target(e):
    if isinstance(e, (ast.Name, ast.Attribute, ast.Subscript)):
        return expr(e)
    if isinstance(e, (ast.Tuple, ast.List)):
        return expr(e)
    raise Unsupported("assignment target " + type(e).__name__)


def body(stmts):
    out = []
    for s in stmts:
        if isinstance(s, (ast.Import, ast.ImportFrom)):
            continue
        out.append(stmt(s))
    return out


def stmt(s):
    if isinstance(s, ast.FunctionDef):
        if s.decorator_list:
            raise Unsupported("decorator")
        a = s.args
        if a.posonlyargs or a.vararg or a.kwonlyargs or a.kwarg:
            raise Unsupported("non-positional parameters")
        n = Node("FunctionDef")
        n.attrs.append(("name", symbol(s.name)))
        for arg in a.args:
            p = Node("Parameter")
            p.attrs.append(("name", symbol(arg.arg)))
            if arg.annotation is not None:
                p.children.append(expr(arg.annotation))
            n.children.append(p)
        n.children += [expr(d) for d in a.defaults]
        n.children += body(s.body)
        if s.returns is not None:
            n.children.append(expr(s.returns))
        return n
    if isinstance(s, (ast.For, ast.While, ast.If)):
        kind = type(s).__name__
        n = Node(kind)
        if isinstance(s, ast.For):
            n.children += [target(s.target), expr(s.iter)]
        else:
            n.children.append(expr(s.test))
        n.children += body(s.body)
        n.children += body(s.orelse)
        return n
    if isinstance(s, ast.Assign):
        n = Node("Assign")
        n.children += [target(t) for t in s.targets]
        n.children.append(expr(s.value))
        return n
    if isinstance(s, ast.AugAssign):
        n = Node("AugAssign")
        n.attrs.append(("op", symbol(op(s.op))))
        n.children += [target(s.target), expr(s.value)]
        return n
    if isinstance(s, ast.Return):
        n = Node("Return")
        if s.value is not None:
            n.children.append(expr(s.value))
        return n
    if isinstance(s, (ast.Pass, ast.Break, ast.Continue)):
        return Node(type(s).__name__)
    if isinstance(s, ast.Expr):
        n = Node("ExprStmt")
        n.children.append(expr(s.value))
        return n
    raise Unsupported(type(s).__name__)


def convert_source(text):
    tree = ast.parse(text)
    mod = Node("Module")
    mod.children += body(tree.body)
    return mod


def read(path):
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return handle.read()


def main(argv):
    if len(argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    mode = argv[1]
    if mode == "dump":
        for path in argv[2:]:
            mod = convert_source(read(path))
            print("%d\t%s" % (mod.count(), mod.sexpr()))
        return 0
    if mode == "golden":
        out_dir = argv[2]
        os.makedirs(out_dir, exist_ok=True)
        rows = []
        for path in sorted(argv[3:]):
            mod = convert_source(read(path))
            stem = os.path.splitext(os.path.basename(path))[0]
            with open(os.path.join(out_dir, stem + ".sexpr"), "w",
                      encoding="utf-8", newline="\n") as handle:
                handle.write(mod.sexpr() + "\n")
            rows.append("%s\t%d" % (stem, mod.count()))
        with open(os.path.join(out_dir, "counts.tsv"), "w",
                  encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(rows) + "\n")
        return 0
    if mode == "check":
        directory = argv[2]
        failures = 0
        checked = 0
        for name in sorted(os.listdir(directory)):
            if not name.endswith(".vp"):
                continue
            stem = name[:-3]
            actual_path = os.path.join(directory, stem + ".sexpr")
            expected = convert_source(read(os.path.join(directory, name))).sexpr()
            actual = read(actual_path).rstrip("\n")
            checked += 1
            if actual != expected:
                failures += 1
                print("MISMATCH %s\n  oracle: %s\n  tool:   %s" % (name, expected, actual))
        print("checked %d programs, %d mismatches" % (checked, failures))
        return 1 if failures or checked == 0 else 0
    print("unknown mode " + json.dumps(mode), file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main(sys.argv))
