"""Surface syntax for algebra elements.

Grammar (ASCII; ∂ symbols are spelled d1/p11 on input):

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor (('*')? factor)*
    factor   := atom ('^' exponent)?
    atom     := rational | 'q' | ident | '(' expr ')'
    exponent := ['-'] nat | '(' intexpr ')'
    intexpr  := ['-'] intterm (('+'|'-') intterm)*
    intterm  := intatom ('*' intatom)*
    intatom  := nat | param | '(' intexpr ')'
    rational := nat ('/' nat)?

Products preserve written order (multiplication is noncommutative) and
juxtaposition multiplies.  Exponents are non-negative integers except on q;
catalog templates may use integer parameters (n, m) inside parenthesized
exponents, instantiated through the evaluation environment.  A factor whose
accumulated product is already zero short-circuits evaluation, so template
terms with vanishing coefficients may carry formally negative powers.
"""

from __future__ import annotations

from fractions import Fraction


class QSyntaxError(ValueError):
    """A parse failure, carrying the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnknownSymbol(KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name


class NegativePower(ValueError):
    pass


# -- tokens -----------------------------------------------------------------

_OPS = set("+-*^()")


def tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "/" and j + 1 < n and text[j + 1].isdigit():
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                tokens.append(("num", Fraction(int(text[i:j]), int(text[j + 1 : k])), i))
                i = k
            else:
                tokens.append(("num", Fraction(int(text[i:j])), i))
                i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise QSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


# -- AST --------------------------------------------------------------------


class Node:
    def eval(self, ctx):
        raise NotImplementedError


class Num(Node):
    def __init__(self, value):
        self.value = value

    def eval(self, ctx):
        return ctx.scalar(self.value)


class QPow(Node):
    def __init__(self, exponent):
        self.exponent = exponent

    def eval(self, ctx):
        return ctx.q_power(self.exponent.eval_int(ctx.env))


class Sym(Node):
    def __init__(self, name, power=None):
        self.name = name
        self.power = power

    def eval(self, ctx):
        p = 1 if self.power is None else self.power.eval_int(ctx.env)
        if p < 0:
            raise NegativePower(f"negative power {p} on {self.name}")
        return ctx.symbol(self.name) ** p


class Group(Node):
    def __init__(self, inner, power=None):
        self.inner = inner
        self.power = power

    def eval(self, ctx):
        v = self.inner.eval(ctx)
        if self.power is None:
            return v
        p = self.power.eval_int(ctx.env)
        if p < 0:
            raise NegativePower(f"negative power {p} on a group")
        return v**p


class Prod(Node):
    def __init__(self, factors):
        self.factors = factors

    def eval(self, ctx):
        result = None
        for f in self.factors:
            if result is not None and not result:
                return result  # zero short-circuits trailing factors
            v = f.eval(ctx)
            result = v if result is None else result * v
        return result


class Sum(Node):
    def __init__(self, signed_terms):
        self.signed_terms = signed_terms

    def eval(self, ctx):
        result = None
        for sign, t in self.signed_terms:
            v = t.eval(ctx)
            if sign < 0:
                v = -v
            result = v if result is None else result + v
        return result


class IntNode:
    """Integer expression over parameters, used inside exponents."""

    def __init__(self, kind, payload):
        self.kind = kind
        self.payload = payload

    def eval_int(self, env):
        k = self.kind
        if k == "const":
            return self.payload
        if k == "var":
            try:
                return env[self.payload]
            except KeyError:
                raise UnknownSymbol(self.payload) from None
        if k == "neg":
            return -self.payload.eval_int(env)
        if k == "add":
            return sum(t.eval_int(env) for t in self.payload)
        if k == "mul":
            out = 1
            for t in self.payload:
                out *= t.eval_int(env)
            return out
        raise AssertionError(k)


# -- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens, text_len):
        self.tokens = tokens
        self.pos = 0
        self.text_len = text_len

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, self.text_len)

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise QSyntaxError(f"expected {kind!r}, found {t[1]!r}", t[2])
        return t

    def parse_expr(self):
        signed = []
        sign = 1
        if self.peek()[0] == "-":
            self.next()
            sign = -1
        signed.append((sign, self.parse_term()))
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            signed.append((1 if op == "+" else -1, self.parse_term()))
        return Sum(signed) if len(signed) > 1 or signed[0][0] < 0 else signed[0][1]

    def parse_term(self):
        factors = [self.parse_factor()]
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.next()
                factors.append(self.parse_factor())
            elif kind in ("num", "name", "("):
                factors.append(self.parse_factor())
            else:
                break
        return Prod(factors) if len(factors) > 1 else factors[0]

    def parse_factor(self):
        kind, value, pos = self.next()
        if kind == "num":
            node = Num(value)
            if self.peek()[0] == "^":
                self.next()
                exp = self.parse_exponent(allow_negative=False)
                node = Group(node, exp)
            return node
        if kind == "name":
            if value == "q":
                if self.peek()[0] == "^":
                    self.next()
                    return QPow(self.parse_exponent(allow_negative=True))
                return QPow(IntNode("const", 1))
            if self.peek()[0] == "^":
                self.next()
                return Sym(value, self.parse_exponent(allow_negative=False))
            return Sym(value)
        if kind == "(":
            inner = self.parse_expr()
            self.expect(")")
            if self.peek()[0] == "^":
                self.next()
                return Group(inner, self.parse_exponent(allow_negative=False))
            return Group(inner)
        raise QSyntaxError(f"unexpected token {value!r}", pos)

    def parse_exponent(self, allow_negative):
        kind, value, pos = self.peek()
        if kind == "-":
            if not allow_negative:
                raise QSyntaxError(
                    "negative powers are only available on q or registered denominators", pos
                )
            self.next()
            t = self.expect("num")
            if t[1].denominator != 1:
                raise QSyntaxError("exponents must be integers", t[2])
            return IntNode("const", -int(t[1]))
        if kind == "num":
            self.next()
            if value.denominator != 1:
                raise QSyntaxError("exponents must be integers", pos)
            return IntNode("const", int(value))
        if kind == "name":
            self.next()
            return IntNode("var", value)
        if kind == "(":
            self.next()
            node = self.parse_intexpr()
            self.expect(")")
            return node
        raise QSyntaxError("expected an exponent", pos)

    def parse_intexpr(self):
        terms = []
        sign = 1
        if self.peek()[0] == "-":
            self.next()
            sign = -1
        t = self.parse_intterm()
        terms.append(IntNode("neg", t) if sign < 0 else t)
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            t = self.parse_intterm()
            terms.append(IntNode("neg", t) if op == "-" else t)
        return terms[0] if len(terms) == 1 else IntNode("add", terms)

    def parse_intterm(self):
        factors = [self.parse_intatom()]
        while self.peek()[0] == "*":
            self.next()
            factors.append(self.parse_intatom())
        return factors[0] if len(factors) == 1 else IntNode("mul", factors)

    def parse_intatom(self):
        kind, value, pos = self.next()
        if kind == "num":
            if value.denominator != 1:
                raise QSyntaxError("exponents must be integers", pos)
            return IntNode("const", int(value))
        if kind == "name":
            return IntNode("var", value)
        if kind == "(":
            node = self.parse_intexpr()
            self.expect(")")
            return node
        raise QSyntaxError(f"unexpected token {value!r} in exponent", pos)


def parse(text):
    tokens = tokenize(text)
    if not tokens:
        raise QSyntaxError("empty expression", 0)
    p = _Parser(tokens, len(text))
    node = p.parse_expr()
    if p.pos != len(tokens):
        t = p.peek()
        raise QSyntaxError(f"trailing input {t[1]!r}", t[2])
    return node


# -- evaluation context -------------------------------------------------------


class AlgebraContext:
    """Resolves symbols against a presentation's generators and named table."""

    def __init__(self, algebra, env=None):
        self.algebra = algebra
        self.env = env or {}

    def scalar(self, value):
        return self.algebra.scalar_element(value)

    def q_power(self, k):
        return self.algebra.q(k)

    def symbol(self, name):
        if name in self.algebra.index:
            return self.algebra.gen(name)
        if name in self.algebra.named:
            return self.algebra.named[name]
        raise UnknownSymbol(name)


def evaluate(text, algebra, env=None):
    """Parse and evaluate surface syntax to a normal-form element."""
    return parse(text).eval(AlgebraContext(algebra, env))
