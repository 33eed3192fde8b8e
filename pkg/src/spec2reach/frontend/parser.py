"""Recursive-descent parser and type checker for the supported C subset.

The subset: one ``main`` function plus non-recursive straight-line helpers
(inlined at their call sites), scalar ``int``/``unsigned int``/``void *``
variables, ``if``/``else``, ``while``, ``goto``/labels, ``break``/``continue``,
and the built-ins ``nondet``, ``assert``, ``__assert_live``, ``malloc``,
``calloc``, ``realloc``, ``free`` and ``reach_error``.
"""

from __future__ import annotations

import copy
from typing import Optional

from .errors import CSyntaxError, Span, UnsupportedFeature
from .lexer import Lexer, Token
from .nodes import (
    ALLOC_FUNCS, ARITH_OPS, INT_MAX, INT_MIN, REL_OPS, UINT_MAX,
    Assert, AssertLive, Assign, Binary, Block, Break, Call, Continue, CType,
    Decl, Expr, ExprStmt, FunctionDef, Goto, If, IntLit, Label, Name,
    Program, Return, Stmt, Unary, While, fresh_uid, walk_stmts,
)

BUILTIN_PROTOTYPES = {"reach_error", "nondet", "__assert_live", "malloc",
                      "calloc", "realloc", "free", "assert", "abort"}

_COMPOUND_ASSIGN = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}
_UNSUPPORTED_OPS = {
    "&": "address-of or bitwise operator", "|": "bitwise operator",
    "^": "bitwise operator", "~": "bitwise operator", "<<": "shift operator",
    ">>": "shift operator", "?": "conditional operator", "[": "array",
    "]": "array", "->": "struct", ".": "struct",
    "<<=": "shift operator", ">>=": "shift operator", "&=": "bitwise operator",
    "|=": "bitwise operator", "^=": "bitwise operator",
}
_BINARY_PREC = [("||",), ("&&",), ("==", "!="), ("<", "<=", ">", ">="),
                ("+", "-"), ("*", "/", "%")]


class Parser:
    def __init__(self, text: str, path: str = "<input>", *,
                 allow_reserved: bool = False,
                 scope: Optional[dict[str, CType]] = None,
                 permissive: bool = False):
        self.path = path
        self.lexer = Lexer(text, path)
        self.toks = self.lexer.tokens()
        self.i = 0
        self.allow_reserved = allow_reserved
        self.permissive = permissive
        self.scopes: list[dict[str, CType]] = [dict(scope or {})]
        self.all_decls: dict[str, CType] = {}
        self.functions: dict[str, FunctionDef] = {}
        self.defining: Optional[str] = None
        self.loop_depth = 0
        self.live_index = 0
        self.inline_count = 0
        self.labels: dict[str, Span] = {}
        self.gotos: list[tuple[str, Span]] = []

    # ------------------------------------------------------------ utilities

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text in texts

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected '{text}' but found '{self.tok.text or 'end of file'}'")
        return self.next()

    def expect_id(self) -> Token:
        if self.tok.kind != "id":
            self.error(f"expected identifier but found '{self.tok.text or 'end of file'}'")
        return self.next()

    def error(self, message: str, span: Optional[Span] = None):
        raise CSyntaxError(span or self.tok.span, message, self.path)

    def unsupported(self, feature: str, span: Optional[Span] = None):
        raise UnsupportedFeature(span or self.tok.span, feature, self.path)

    def span_from(self, start: Token) -> Span:
        end = self.toks[self.i - 1].span
        return Span(start.span.start, end.end, start.span.line, start.span.col)

    def lookup(self, name: str, span: Span) -> CType:
        for sc in reversed(self.scopes):
            if name in sc:
                return sc[name]
        if self.permissive:
            return CType.INT
        self.error(f"undeclared identifier '{name}'", span)

    def declare(self, name: str, ctype: CType, span: Span):
        if name.startswith("__") and not self.allow_reserved:
            self.error(f"identifier '{name}' uses the reserved prefix '__'", span)
        for sc in self.scopes:
            if name in sc:
                self.unsupported(f"shadowed or repeated declaration of '{name}'", span)
        prev = self.all_decls.get(name)
        if prev is not None and prev is not ctype:
            self.unsupported(f"variable '{name}' declared with two different types", span)
        self.all_decls[name] = ctype
        self.scopes[-1][name] = ctype

    # -------------------------------------------------------------- types

    def at_type(self) -> bool:
        return self.at("int", "unsigned", "void", "signed", "long", "extern")

    def parse_type(self, allow_void: bool = False) -> Optional[CType]:
        start = self.tok
        if self.accept("long"):
            self.unsupported("long integer type", start.span)
        if self.accept("unsigned"):
            if self.accept("long"):
                self.unsupported("long integer type", start.span)
            self.accept("int")
            base = CType.UINT
        elif self.accept("signed"):
            self.accept("int")
            base = CType.INT
        elif self.accept("int"):
            if self.at("long"):
                self.unsupported("long integer type")
            base = CType.INT
        elif self.accept("void"):
            if self.accept("*"):
                if self.at("*"):
                    self.unsupported("pointer to pointer")
                return CType.PTR
            if not allow_void:
                self.error("'void' is only valid as a return type", start.span)
            return None
        else:
            self.error(f"expected a type but found '{self.tok.text}'")
        if self.at("*"):
            self.unsupported("pointer to integer (only 'void *' is supported)")
        return base

    # ------------------------------------------------------ translation unit

    def parse_program(self) -> Program:
        prog = Program()
        while self.tok.kind != "eof":
            if self.accept(";"):
                continue
            start = self.tok
            is_extern = bool(self.accept("extern"))
            rtype = self.parse_type(allow_void=True)
            name_tok = self.expect_id()
            if self.at("("):
                fn = self.parse_function(start, rtype, name_tok, is_extern)
                if fn is None:
                    continue
                if fn.name == "main":
                    prog.main = fn
                else:
                    self.functions[fn.name] = fn
                continue
            if is_extern:
                self.unsupported("extern variable", start.span)
            if rtype is None:
                self.error("variable declared void", name_tok.span)
            prog.globals.extend(self.parse_declarators(start, rtype, name_tok, glob=True))
        for label, sp in self.gotos:
            if label not in self.labels:
                self.error(f"use of undeclared label '{label}'", sp)
        return prog

    def skip_prototype_params(self):
        depth = 0
        while True:
            t = self.next()
            if t.kind == "eof":
                self.error("unterminated parameter list", t.span)
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    return

    def parse_function(self, start: Token, rtype, name_tok: Token, is_extern: bool):
        name = name_tok.text
        if self.peek_prototype():
            self.skip_prototype_params()
            self.expect(";")
            return None
        if name in BUILTIN_PROTOTYPES or is_extern:
            self.error(f"cannot define built-in or extern function '{name}'", name_tok.span)
        if name in self.functions:
            self.error(f"redefinition of '{name}'", name_tok.span)
        self.expect("(")
        params: list[Decl] = []
        self.scopes.append({})
        if self.at("void") and self.peek().text == ")":
            self.next()
        elif not self.at(")"):
            while True:
                ptok = self.tok
                ptype = self.parse_type()
                pname = self.expect_id()
                if self.at("("):
                    self.unsupported("function pointer", pname.span)
                self.declare(pname.text, ptype, pname.span)
                params.append(Decl(ptype, pname.text, None, span=self.span_from(ptok)))
                if not self.accept(","):
                    break
        self.expect(")")
        if name == "main" and params:
            self.unsupported("parameters of main", name_tok.span)
        self.defining = name
        body = self.parse_block(new_scope=False)
        self.scopes.pop()
        self.defining = None
        fn = FunctionDef(name, rtype, params, body, span=self.span_from(start))
        if name != "main":
            self.check_helper(fn)
        return fn

    def peek_prototype(self) -> bool:
        """True if the parenthesised list at the cursor ends in ';'."""
        depth = 0
        j = self.i
        while j < len(self.toks):
            t = self.toks[j]
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    return self.toks[j + 1].text == ";"
            elif t.kind == "eof":
                return False
            j += 1
        return False

    def check_helper(self, fn: FunctionDef):
        stmts = fn.body.stmts
        for i, s in enumerate(stmts):
            for sub in walk_stmts(s):
                if isinstance(sub, (While, Goto, Label, Break, Continue)):
                    self.unsupported(f"loops or jumps in helper function '{fn.name}'", sub.span)
                if isinstance(sub, AssertLive):
                    self.unsupported(f"__assert_live in helper function '{fn.name}'", sub.span)
                if isinstance(sub, Return) and not (sub is s and i == len(stmts) - 1):
                    self.unsupported(f"early return in helper function '{fn.name}'", sub.span)
        has_ret = bool(stmts) and isinstance(stmts[-1], Return)
        if fn.ret is not None and not (has_ret and stmts[-1].value is not None):
            self.unsupported(f"helper function '{fn.name}' must end with 'return <expr>;'", fn.span)

    # ----------------------------------------------------------- statements

    def parse_block(self, new_scope: bool = True) -> Block:
        start = self.expect("{")
        if new_scope:
            self.scopes.append({})
        stmts: list[Stmt] = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("expected '}' before end of file")
            stmts.extend(self.parse_statement())
        self.expect("}")
        if new_scope:
            self.scopes.pop()
        return Block(stmts, span=self.span_from(start))

    def parse_body(self) -> Block:
        """Branch and loop bodies are always blocks in the AST."""
        if self.at("{"):
            return self.parse_block()
        start = self.tok
        self.scopes.append({})
        stmts = self.parse_statement()
        self.scopes.pop()
        return Block(stmts, span=self.span_from(start))

    def parse_statement(self) -> list[Stmt]:
        t = self.tok
        if self.at("{"):
            return [self.parse_block()]
        if self.accept(";"):
            return []
        if self.at_type():
            if self.at("extern"):
                self.unsupported("block-scope extern declaration")
            ctype = self.parse_type()
            name_tok = self.expect_id()
            if self.at("("):
                self.unsupported("nested function declaration", name_tok.span)
            return self.parse_declarators(t, ctype, name_tok, glob=False)
        if self.accept("if"):
            return [self.parse_if(t)]
        if self.accept("while"):
            self.expect("(")
            cond = self.parse_cond()
            self.expect(")")
            self.loop_depth += 1
            body = self.parse_body()
            self.loop_depth -= 1
            return [While(cond, body, span=self.span_from(t))]
        if self.accept("goto"):
            lab = self.expect_id()
            self.expect(";")
            self.gotos.append((lab.text, lab.span))
            return [Goto(lab.text, span=self.span_from(t))]
        if self.accept("break") or self.accept("continue"):
            if self.loop_depth == 0:
                self.error(f"'{t.text}' outside of a loop", t.span)
            self.expect(";")
            cls = Break if t.text == "break" else Continue
            return [cls(span=self.span_from(t))]
        if self.accept("return"):
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return [Return(value, span=self.span_from(t))]
        if t.kind == "id" and self.peek().text == ":":
            self.next()
            self.next()
            if t.text in self.labels:
                self.error(f"duplicate label '{t.text}'", t.span)
            self.labels[t.text] = t.span
            stmts: list[Stmt] = [Label(t.text, span=self.span_from(t))]
            # `L:;` is the canonical spelling of a bare label
            self.accept(";")
            return stmts
        if t.kind == "id":
            return self.parse_simple(t)
        if self.at("++", "--"):
            op = self.next()
            name = self.expect_id()
            self.expect(";")
            return [self.make_incdec(name, op.text, t)]
        if t.kind == "op" and t.text in _UNSUPPORTED_OPS:
            self.unsupported(_UNSUPPORTED_OPS[t.text])
        self.error(f"unexpected '{t.text or 'end of file'}'")

    def make_incdec(self, name: Token, op: str, start: Token) -> Stmt:
        ctype = self.lookup(name.text, name.span)
        if ctype is CType.PTR:
            self.unsupported("pointer arithmetic", name.span)
        target = Name(name.text, ctype=ctype, span=name.span)
        one = IntLit(1, ctype=CType.INT, span=name.span)
        value = self.make_binary("+" if op == "++" else "-", target, one, name.span)
        return Assign(name.text, value, span=self.span_from(start))

    def parse_simple(self, t: Token) -> list[Stmt]:
        name = t.text
        if self.peek().text == "(":
            self.next()
            return self.parse_call_statement(t, name)
        self.next()
        if self.at("++", "--"):
            op = self.next()
            self.expect(";")
            return [self.make_incdec(t, op.text, t)]
        if self.at(*_COMPOUND_ASSIGN):
            op = _COMPOUND_ASSIGN[self.next().text]
            rhs = self.parse_expr()
            self.expect(";")
            ctype = self.lookup(name, t.span)
            value = self.make_binary(op, Name(name, ctype=ctype, span=t.span), rhs, t.span)
            self.check_no_alloc(value)
            return [Assign(name, value, span=self.span_from(t))]
        if self.at("="):
            self.next()
            if self.tok.kind == "id" and self.peek().text == "(" and self.tok.text in self.functions:
                ctype = self.lookup(name, t.span)
                return self.inline_call(t, target=(name, ctype), decl=False)
            value = self.parse_expr()
            self.expect(";")
            ctype = self.lookup(name, t.span)
            self.check_assignable(ctype, value, t.span)
            return [Assign(name, value, span=self.span_from(t))]
        if self.tok.kind == "op" and self.tok.text in _UNSUPPORTED_OPS:
            self.unsupported(_UNSUPPORTED_OPS[self.tok.text])
        self.error(f"expected statement after '{name}'")

    def parse_call_statement(self, t: Token, name: str) -> list[Stmt]:
        if name in self.functions:
            self.i -= 1
            return self.inline_call(t, target=None, decl=False)
        if name == self.defining and name != "main":
            self.unsupported("recursion", t.span)
        if name == "assert":
            self.expect("(")
            cond = self.parse_cond()
            self.expect(")")
            self.expect(";")
            return [Assert(cond, span=self.span_from(t))]
        if name == "__assert_live":
            self.expect("(")
            cond = self.parse_cond()
            self.expect(")")
            self.expect(";")
            idx = self.live_index
            self.live_index += 1
            return [AssertLive(idx, cond, span=self.span_from(t))]
        if name == "reach_error":
            self.expect("(")
            self.expect(")")
            self.expect(";")
            sp = self.span_from(t)
            return [Assert(IntLit(0, ctype=CType.INT, span=sp), span=sp)]
        self.i -= 1
        call = self.parse_primary(stmt_level=True)
        if not isinstance(call, Call):
            self.error("expected a call")
        self.expect(";")
        if call.func in ALLOC_FUNCS:
            self.unsupported(f"result of {call.func} discarded", t.span)
        return [ExprStmt(call, span=self.span_from(t))]

    def parse_declarators(self, start: Token, ctype: CType, name_tok: Token, glob: bool) -> list[Decl]:
        out: list[Stmt] = []
        while True:
            if self.at("["):
                self.unsupported("array")
            if self.at("=") and self.peek().kind == "id" and self.peek(2).text == "(" \
                    and self.peek().text in self.functions:
                self.next()
                if glob:
                    self.unsupported("function call in global initializer")
                self.declare(name_tok.text, ctype, name_tok.span)
                out.append(Decl(ctype, name_tok.text, None, span=name_tok.span))
                out.extend(self.inline_call(name_tok, target=(name_tok.text, ctype), decl=True))
                return out
            init = None
            if self.accept("="):
                init = self.parse_expr()
                self.check_assignable(ctype, init, name_tok.span)
                if glob and not isinstance(init, IntLit):
                    self.unsupported("non-constant global initializer", init.span)
            self.declare(name_tok.text, ctype, name_tok.span)
            sp = Span(start.span.start, self.toks[self.i - 1].span.end,
                      start.span.line, start.span.col)
            out.append(Decl(ctype, name_tok.text, init, span=sp))
            if not self.accept(","):
                break
            name_tok = self.expect_id()
        self.expect(";")
        return out

    def parse_if(self, t: Token) -> Stmt:
        self.expect("(")
        cond = self.parse_cond()
        self.expect(")")
        then = self.parse_body()
        orelse = None
        if self.accept("else"):
            orelse = self.parse_body()
            if not orelse.stmts:
                orelse = None
        sp = self.span_from(t)
        # `if (!(e)) reach_error();` is the output encoding of `assert(e)`
        if (orelse is None and isinstance(cond, Unary) and cond.op == "!"
                and len(then.stmts) == 1 and isinstance(then.stmts[0], Assert)
                and then.stmts[0].cond == IntLit(0, ctype=CType.INT)
                and self.toks[self.i - 1].text == ";"
                and self._then_is_reach_error(then)):
            return Assert(cond.operand, span=sp)
        return If(cond, then, orelse, span=sp)

    def _then_is_reach_error(self, then: Block) -> bool:
        # distinguishes `reach_error();` from an explicit `assert(0);`
        j = self.i - 1
        while j > 0 and self.toks[j].text in (";", "}", ")", "("):
            j -= 1
        return self.toks[j].text == "reach_error"

    # ---------------------------------------------------------- inlining

    def inline_call(self, t: Token, target: Optional[tuple[str, CType]], decl: bool) -> list[Stmt]:
        name_tok = self.expect_id()
        fn = self.functions[name_tok.text]
        self.expect("(")
        args: list[Expr] = []
        if not self.at(")"):
            while True:
                args.append(self.parse_expr())
                if not self.accept(","):
                    break
        self.expect(")")
        self.expect(";")
        sp = self.span_from(t)
        if len(args) != len(fn.params):
            self.error(f"'{fn.name}' expects {len(fn.params)} argument(s)", sp)
        if target is not None and fn.ret is None:
            self.error(f"void function '{fn.name}' used as a value", sp)
        self.inline_count += 1
        prefix = f"__f{self.inline_count}_"
        rename = {p.name: prefix + p.name for p in fn.params}
        for s in walk_stmts(fn.body):
            if isinstance(s, Decl):
                rename[s.name] = prefix + s.name
        body: list[Stmt] = []
        for p, a in zip(fn.params, args):
            self.check_assignable(p.ctype, a, sp)
            body.append(Decl(p.ctype, rename[p.name], a, span=sp))
        stmts = list(fn.body.stmts)
        ret = None
        if stmts and isinstance(stmts[-1], Return):
            ret = stmts.pop().value
        body.extend(_clone_stmt(s, rename, sp) for s in stmts)
        if target is not None:
            value = _clone_expr(ret, rename, sp)
            self.check_assignable(target[1], value, sp)
            body.append(Assign(target[0], value, span=sp))
        for old, new in rename.items():
            self.all_decls[new] = fn_var_type(fn, old)
        return [Block(body, span=sp)]

    # -------------------------------------------------------- expressions

    def parse_cond(self) -> Expr:
        e = self.parse_expr()
        self.check_no_alloc(e)
        return e

    def parse_expr(self) -> Expr:
        return self.parse_binary(0)

    def parse_binary(self, level: int) -> Expr:
        if level == len(_BINARY_PREC):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        while self.tok.kind == "op" and self.tok.text in _BINARY_PREC[level]:
            op_tok = self.next()
            right = self.parse_binary(level + 1)
            left = self.make_binary(op_tok.text, left, right, op_tok.span)
        return left

    def make_binary(self, op: str, left: Expr, right: Expr, sp: Span) -> Expr:
        span = (left.span or sp).cover(right.span or sp)
        lt, rt = left.ctype, right.ctype
        if op in ARITH_OPS:
            if CType.PTR in (lt, rt):
                self.unsupported("pointer arithmetic", sp)
            ctype = CType.UINT if CType.UINT in (lt, rt) else CType.INT
            return Binary(op, left, right, ctype=ctype, span=span)
        if op in REL_OPS:
            if CType.PTR in (lt, rt):
                ok = op in ("==", "!=") and all(
                    t is CType.PTR or (isinstance(e, IntLit) and e.value == 0)
                    for e, t in ((left, lt), (right, rt)))
                if not ok:
                    self.unsupported("pointer comparison other than ==/!= with pointers or 0", sp)
            return Binary(op, left, right, ctype=CType.BOOL, span=span)
        return Binary(op, left, right, ctype=CType.BOOL, span=span)

    def parse_unary(self) -> Expr:
        t = self.tok
        if self.accept("-"):
            if self.tok.kind == "num":
                num = self.next()
                value = -num.value
                limit = UINT_MAX if num.unsigned else -INT_MIN
                if num.value > limit:
                    self.error("integer literal out of range", num.span)
                if num.unsigned:
                    return Unary("-", IntLit(num.value, ctype=CType.UINT, span=num.span),
                                 ctype=CType.UINT, span=self.span_from(t))
                return IntLit(value, ctype=CType.INT, span=self.span_from(t))
            operand = self.parse_unary()
            if operand.ctype is CType.PTR:
                self.unsupported("pointer arithmetic", t.span)
            ctype = CType.UINT if operand.ctype is CType.UINT else CType.INT
            return Unary("-", operand, ctype=ctype, span=self.span_from(t))
        if self.accept("+"):
            return self.parse_unary()
        if self.accept("!"):
            operand = self.parse_unary()
            return Unary("!", operand, ctype=CType.BOOL, span=self.span_from(t))
        if self.at("++", "--"):
            self.unsupported("increment inside expression")
        if self.at("*"):
            self.unsupported("pointer dereference")
        if self.at("&"):
            self.unsupported("address-of operator")
        if self.at("~"):
            self.unsupported("bitwise operator")
        return self.parse_primary()

    def parse_primary(self, stmt_level: bool = False) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.next()
            if t.unsigned:
                if t.value > UINT_MAX:
                    self.error("integer literal out of range", t.span)
                return IntLit(t.value, ctype=CType.UINT, span=t.span)
            if t.value > INT_MAX:
                self.error("integer literal out of int range", t.span)
            return IntLit(t.value, ctype=CType.INT, span=t.span)
        if self.accept("("):
            if self.at_type():
                self.unsupported("cast")
            e = self.parse_expr()
            self.expect(")")
            return e
        if t.kind == "id":
            self.next()
            if self.at("("):
                return self.parse_call(t, stmt_level)
            if self.at("["):
                self.unsupported("array")
            if self.at("->", "."):
                self.unsupported("struct")
            if self.at("=", "++", "--", *_COMPOUND_ASSIGN):
                self.unsupported("assignment inside an expression")
            return Name(t.text, ctype=self.lookup(t.text, t.span), span=t.span)
        if t.kind == "op" and t.text in _UNSUPPORTED_OPS:
            self.unsupported(_UNSUPPORTED_OPS[t.text])
        self.error(f"expected expression but found '{t.text or 'end of file'}'")

    def parse_call(self, t: Token, stmt_level: bool = False) -> Expr:
        name = t.text
        if name == self.defining and name != "main":
            self.unsupported("recursion", t.span)
        if name in self.functions:
            self.unsupported("helper call inside an expression", t.span)
        self.expect("(")
        args: list[Expr] = []
        if not self.at(")"):
            while True:
                args.append(self.parse_expr())
                if not self.accept(","):
                    break
        self.expect(")")
        sp = self.span_from(t)
        arity = {"nondet": 0, "malloc": 1, "calloc": 2, "realloc": 2, "free": 1}
        if name not in arity:
            if name in ("assert", "__assert_live", "reach_error"):
                self.error(f"'{name}' can only be used as a statement", sp)
            self.unsupported(f"call to unknown function '{name}'", sp)
        if len(args) != arity[name]:
            self.error(f"'{name}' expects {arity[name]} argument(s)", sp)
        if name == "free":
            if not stmt_level:
                self.error("'free' can only be used as a statement", sp)
            if args[0].ctype is not CType.PTR and not _is_zero(args[0]):
                self.unsupported("free of a non-pointer", sp)
            return Call(name, args, ctype=CType.INT, span=sp)
        if name == "nondet":
            return Call(name, args, ctype=CType.INT, span=sp)
        if name == "realloc":
            if args[0].ctype is not CType.PTR and not _is_zero(args[0]):
                self.unsupported("realloc of a non-pointer", sp)
            size_args = args[1:]
        else:
            size_args = args
        for a in size_args:
            if a.ctype is CType.PTR:
                self.unsupported("pointer used as allocation size", sp)
        return Call(name, args, ctype=CType.PTR, span=sp)

    # ------------------------------------------------------------- checks

    def check_no_alloc(self, e: Expr):
        for sub in e.walk():
            if isinstance(sub, Call) and sub.func in ALLOC_FUNCS:
                self.unsupported("allocation inside an expression", sub.span)

    def check_assignable(self, target: CType, value: Expr, sp: Span):
        if isinstance(value, Call) and value.func in ALLOC_FUNCS:
            for a in value.args:
                self.check_no_alloc(a)
            if target is not CType.PTR:
                self.unsupported("allocation assigned to an integer", sp)
            return
        self.check_no_alloc(value)
        if target is CType.PTR:
            if value.ctype is not CType.PTR and not _is_zero(value):
                self.unsupported("integer to pointer conversion", value.span or sp)
        elif value.ctype is CType.PTR:
            self.unsupported("pointer to integer conversion", value.span or sp)


def _is_zero(e: Expr) -> bool:
    return isinstance(e, IntLit) and e.value == 0


def fn_var_type(fn: FunctionDef, name: str) -> CType:
    for p in fn.params:
        if p.name == name:
            return p.ctype
    for s in walk_stmts(fn.body):
        if isinstance(s, Decl) and s.name == name:
            return s.ctype
    return CType.INT


def _clone_expr(e: Expr, rename: dict[str, str], sp: Span) -> Expr:
    e = copy.deepcopy(e)
    for sub in e.walk():
        sub.span = sp
        if isinstance(sub, Name):
            sub.id = rename.get(sub.id, sub.id)
    return e


def _clone_stmt(s: Stmt, rename: dict[str, str], sp: Span) -> Stmt:
    s = copy.deepcopy(s)
    for sub in walk_stmts(s):
        sub.span = sp
        sub.uid = fresh_uid()
        if isinstance(sub, Decl):
            sub.name = rename.get(sub.name, sub.name)
        if isinstance(sub, Assign):
            sub.target = rename.get(sub.target, sub.target)
        for e in sub.exprs():
            for x in e.walk():
                x.span = sp
                if isinstance(x, Name):
                    x.id = rename.get(x.id, x.id)
    return s


def parse(text: str, path: str = "<input>", *, allow_reserved: bool = False) -> Program:
    """Parse a translation unit into a typed :class:`Program`."""
    return Parser(text, path, allow_reserved=allow_reserved).parse_program()


def parse_statements(text: str, scope: Optional[dict[str, CType]] = None, *,
                     permissive: bool = False) -> list[Stmt]:
    """Parse a statement list (used for instrumentation templates)."""
    p = Parser(text, "<template>", allow_reserved=True, scope=scope, permissive=permissive)
    out: list[Stmt] = []
    while p.tok.kind != "eof":
        out.extend(p.parse_statement())
    return out


def parse_expression(text: str, scope: Optional[dict[str, CType]] = None, *,
                     permissive: bool = False) -> Expr:
    p = Parser(text, "<expr>", allow_reserved=True, scope=scope, permissive=permissive)
    e = p.parse_expr()
    if p.tok.kind != "eof":
        p.error(f"trailing input '{p.tok.text}'")
    return e
