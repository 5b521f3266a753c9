"""
Expression language for f(z,t), h(z) and test functions.

A small Pratt parser turns text into an immutable AST which evaluates on
complex scalars or numpy arrays. Every power uses the principal branch.

Grammar (highest binding last):
    expr   := expr ('+' | '-') expr
            | expr ('*' | '/') expr
            | expr '^' expr            right-associative
            | '-' expr                 binds tighter than the base of '^'
            | number | 'i' | name | func '(' expr ')' | '(' expr ')'
    name   := z | t | x | y | q | b
    func   := exp | gamma
"""

import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from cfde_special import SingularityError, gamma, ppow

VARIABLES = ("z", "t", "x", "y")
PARAMETERS = ("q", "b")
FUNCTIONS = ("exp", "gamma")

# Binding powers
BP_ADD = 10
BP_MUL = 20
BP_POW = 30
BP_NEG = 40


class ExprSyntaxError(ValueError):
    """Syntax, arity or folding error, with the offset in the source text."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} at offset {position}"
        super().__init__(message)


class EvaluationSingularity(SingularityError):
    """Division by zero or 0 to a negative power while evaluating an expression."""

    def __init__(self, message, subexpression):
        self.subexpression = subexpression
        super().__init__(f"{message} in '{subexpression}'")


# AST nodes

@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


class Token(NamedTuple):
    kind: str
    text: str
    position: int


TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def tokenize(text):
    """
    Split text into tokens.

    Example:
        tokenize("z*t") -> [Token('name','z',0), Token('op','*',1), Token('name','t',2), Token('end','',3)]
    """
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = TOKEN_PATTERN.match(text, pos)
        if m is None or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character '{text[bad]}'", bad)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """Pratt parser over the token list of one expression."""

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.open_groups = []

    @property
    def token(self):
        return self.tokens[self.index]

    def _end_of_input(self, message, position):
        # inside a group the error points at the innermost unmatched '('
        if self.open_groups:
            return ExprSyntaxError("unmatched '('", self.open_groups[-1])
        return ExprSyntaxError(message, position)

    def advance(self, expected=None):
        tok = self.token
        if expected is not None and tok.text != expected:
            if tok.kind == "end":
                raise self._end_of_input(f"expected '{expected}', found end of input", tok.position)
            raise ExprSyntaxError(f"expected '{expected}', found '{tok.text}'", tok.position)
        self.index += 1
        return tok

    def parse(self):
        if self.token.kind == "end":
            raise ExprSyntaxError("empty expression", 0)
        node = self.expression(0)
        if self.token.kind != "end":
            raise ExprSyntaxError(f"unexpected '{self.token.text}'", self.token.position)
        return node

    def expression(self, rbp):
        left = self.nud(self.advance())
        while rbp < self.lbp(self.token):
            left = self.led(self.advance(), left)
        return left

    @staticmethod
    def lbp(tok):
        if tok.kind != "op":
            return 0
        return {"+": BP_ADD, "-": BP_ADD, "*": BP_MUL, "/": BP_MUL, "^": BP_POW}.get(tok.text, 0)

    def nud(self, tok):
        if tok.kind == "number":
            return Num(complex(float(tok.text)))
        if tok.kind == "name":
            return self.name(tok)
        if tok.text == "-":
            return Neg(self.expression(BP_NEG))
        if tok.text == "(":
            if self.token.text == ")":
                raise ExprSyntaxError("empty parentheses", tok.position)
            self.open_groups.append(tok.position)
            node = self.expression(0)
            self.advance(")")
            self.open_groups.pop()
            return node
        if tok.kind == "end":
            raise self._end_of_input("unexpected end of input", tok.position)
        raise ExprSyntaxError(f"unexpected '{tok.text}'", tok.position)

    def led(self, tok, left):
        if tok.text == "^":
            # right-associative
            return BinOp("^", left, self.expression(BP_POW - 1))
        return BinOp(tok.text, left, self.expression(self.lbp(tok)))

    def name(self, tok):
        word = tok.text
        if word == "i":
            return Num(1j)
        if word in VARIABLES or word in PARAMETERS:
            return Var(word)
        if word in FUNCTIONS:
            if self.token.text != "(":
                raise ExprSyntaxError(f"function '{word}' takes exactly one argument", tok.position)
            self.open_groups.append(self.advance("(").position)
            if self.token.text == ")":
                raise ExprSyntaxError(f"function '{word}' takes exactly one argument", tok.position)
            arg = self.expression(0)
            self.advance(")")
            self.open_groups.pop()
            if word == "gamma":
                return fold_gamma(arg, tok.position)
            return Call(word, arg)
        raise ExprSyntaxError(f"unknown name '{word}'", tok.position)


def fold_gamma(arg, position=None):
    """
    Fold gamma(arg) to a constant when arg is constant.

    gamma may depend on the real parameter q (folded at evaluation time);
    z, t, x, y and the complex b are rejected.
    """
    names = free_names(arg)
    bad = names - {"q"}
    if bad:
        raise ExprSyntaxError(f"gamma of non-constant argument (depends on {', '.join(sorted(bad))})", position)
    if "q" in names:
        return Call("gamma", arg)
    value = evaluate(arg, {})
    if value.imag != 0:
        raise ExprSyntaxError("gamma of a complex argument", position)
    try:
        return Num(complex(gamma(value.real)))
    except ValueError as e:
        raise ExprSyntaxError(str(e), position)


def parse(text):
    """
    Parse an expression string into an AST.

    Args:
        text (str): Expression source

    Returns:
        AST node (Num, Var, Neg, BinOp or Call)

    Example:
        parse("z*t") -> BinOp('*', Var('z'), Var('t'))
        parse("(")   -> ExprSyntaxError: unmatched '(' at offset 0
    """
    return Parser(text).parse()


def free_names(node):
    """Set of variable and parameter names used by node."""
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Neg):
        return free_names(node.arg)
    if isinstance(node, BinOp):
        return free_names(node.left) | free_names(node.right)
    if isinstance(node, Call):
        return free_names(node.arg)
    return set()


def has_imaginary_literal(node):
    """True when some literal in node has a nonzero imaginary part."""
    if isinstance(node, Num):
        return node.value.imag != 0
    if isinstance(node, Neg):
        return has_imaginary_literal(node.arg)
    if isinstance(node, BinOp):
        return has_imaginary_literal(node.left) or has_imaginary_literal(node.right)
    if isinstance(node, Call):
        return has_imaginary_literal(node.arg)
    return False


def rename(node, mapping):
    """Rename variables, e.g. rename(ast, {"x": "z", "y": "t"})."""
    if isinstance(node, Var):
        return Var(mapping.get(node.name, node.name))
    if isinstance(node, Neg):
        return Neg(rename(node.arg, mapping))
    if isinstance(node, BinOp):
        return BinOp(node.op, rename(node.left, mapping), rename(node.right, mapping))
    if isinstance(node, Call):
        return Call(node.func, rename(node.arg, mapping))
    return node


def _format_real(x):
    text = repr(float(x))
    return f"({text})" if text.startswith("-") else text


def to_text(node):
    """
    Canonical text of an AST; parse(to_text(ast)) == ast for parsed ASTs.

    Example:
        to_text(parse("z * t + 1")) -> "((z*t)+1.0)"
    """
    if isinstance(node, Num):
        v = node.value
        if v.imag == 0:
            return _format_real(v.real)
        if v == 1j:
            return "i"
        if v.real == 0:
            return f"({_format_real(v.imag)}*i)"
        return f"({_format_real(v.real)}+{_format_real(v.imag)}*i)"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)}{node.op}{to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def _contains_z_power(node):
    if isinstance(node, BinOp):
        if node.op == "^":
            return node.left == Var("z")
        if node.op == "*":
            return _contains_z_power(node.left) or _contains_z_power(node.right)
        if node.op == "/":
            return _contains_z_power(node.left)
    if isinstance(node, Neg):
        return _contains_z_power(node.arg)
    return False


def times_z_q(node):
    """
    Symbolic product z^q * node with z-power cancellation.

    z^e * z^q is rewritten as z^(e+q), which is exact for the principal
    branch with real exponents; the product distributes over sums. This is
    how F(z,t) = z^q f(z,t) stays finite at z = 0 when f carries z^(-q).

    Example:
        to_text(times_z_q(parse("z^(-q)*t"))) -> "((z^((-q)+q))*t)"
    """
    zq = BinOp("^", Var("z"), Var("q"))
    if isinstance(node, BinOp):
        if node.op == "^" and node.left == Var("z"):
            return BinOp("^", Var("z"), BinOp("+", node.right, Var("q")))
        if node.op in ("+", "-"):
            return BinOp(node.op, times_z_q(node.left), times_z_q(node.right))
        if node.op == "*":
            if _contains_z_power(node.left):
                return BinOp("*", times_z_q(node.left), node.right)
            if _contains_z_power(node.right):
                return BinOp("*", node.left, times_z_q(node.right))
        if node.op == "/" and _contains_z_power(node.left):
            return BinOp("/", times_z_q(node.left), node.right)
    if isinstance(node, Neg):
        return Neg(times_z_q(node.arg))
    return BinOp("*", zq, node)


def evaluate(node, env):
    """
    Evaluate an AST on complex scalars or numpy arrays.

    Args:
        node: AST from parse()
        env (dict): Values for the free names, e.g. {"z": ..., "t": ..., "q": 0.5, "b": 1}

    Returns:
        complex or ndarray

    Example:
        evaluate(parse("z*t"), {"z": 2, "t": 3}) -> (6+0j)
        evaluate(parse("(-1)^0.5"), {})          -> 1j
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name not in env:
            raise KeyError(f"unbound name '{node.name}'")
        value = env[node.name]
        return value if isinstance(value, np.ndarray) else complex(value)
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    if isinstance(node, Call):
        arg = evaluate(node.arg, env)
        if node.func == "exp":
            return np.exp(arg) if isinstance(arg, np.ndarray) else complex(np.exp(arg))
        if node.func == "gamma":
            return complex(gamma(complex(arg).real))
        raise ExprSyntaxError(f"unknown function '{node.func}'")

    left = evaluate(node.left, env)
    right = evaluate(node.right, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if np.any(np.asarray(right) == 0):
            raise EvaluationSingularity("division by zero", to_text(node))
        return left / right
    if node.op == "^":
        exponent = np.asarray(right)
        if np.any(exponent.imag != 0) or exponent.size != 1:
            raise EvaluationSingularity("exponent must be a real constant", to_text(node))
        try:
            return ppow(left, float(exponent.real.ravel()[0]))
        except SingularityError:
            raise EvaluationSingularity("zero raised to a negative power", to_text(node))
    raise ExprSyntaxError(f"unknown operator '{node.op}'")


def compile_expr(node, **params):
    """
    Bind parameters and return a function of (z, t).

    Example:
        F = compile_expr(parse("z+t"), q=0.5, b=1)
        F(1, 2) -> (3+0j)
    """
    def fn(z, t=0j):
        env = dict(params)
        env["z"] = z
        env["t"] = t
        return evaluate(node, env)
    return fn
