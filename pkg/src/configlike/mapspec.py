"""Maps X -> R^m given as small arithmetic expressions over x1..xd.

Expressions are parsed with :mod:`ast` and only a whitelisted subset of
Python syntax is accepted, so scenario files cannot run arbitrary code.
Integer literals stay integers, which keeps polynomial maps exact on
:class:`fractions.Fraction` inputs.
"""
from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

FUNCTIONS = {"sin": math.sin, "cos": math.cos, "exp": math.exp, "min": min, "max": max}
_VAR = re.compile(r"^x([1-9][0-9]*)$")
_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


class MapSpecError(ValueError):
    pass


def _validate(node: ast.AST) -> int:
    """Check the tree and return the largest variable index used."""
    top = 0
    for sub in ast.walk(node):
        if isinstance(sub, (ast.Expression, ast.Load)):
            continue
        if isinstance(sub, ast.BinOp):
            if not isinstance(sub.op, _BINOPS):
                raise MapSpecError(f"operator {type(sub.op).__name__} not allowed")
        elif isinstance(sub, ast.UnaryOp):
            if not isinstance(sub.op, (ast.USub, ast.UAdd)):
                raise MapSpecError(f"operator {type(sub.op).__name__} not allowed")
        elif isinstance(sub, ast.Constant):
            if isinstance(sub.value, bool) or not isinstance(sub.value, (int, float)):
                raise MapSpecError(f"constant {sub.value!r} not allowed")
        elif isinstance(sub, ast.Name):
            m = _VAR.match(sub.id)
            if m:
                top = max(top, int(m.group(1)))
            elif sub.id not in FUNCTIONS and sub.id != "pi":
                raise MapSpecError(f"unknown name {sub.id!r}")
        elif isinstance(sub, ast.Call):
            if not isinstance(sub.func, ast.Name) or sub.func.id not in FUNCTIONS:
                raise MapSpecError("only sin, cos, exp, min, max may be called")
            if sub.keywords:
                raise MapSpecError("keyword arguments not allowed")
        elif isinstance(sub, (ast.operator, ast.unaryop)):
            continue
        else:
            raise MapSpecError(f"syntax {type(sub).__name__} not allowed")
    return top


def _compile(exprs: Sequence[str], nvars: int) -> Callable:
    bodies = []
    for e in exprs:
        tree = ast.parse(e.replace("^", "**"), mode="eval")
        _validate(tree)
        bodies.append(ast.unparse(tree.body))
    args = ", ".join(f"x{i}" for i in range(1, nvars + 1))
    src = f"lambda {args}: ({', '.join(bodies)},)"
    env = dict(FUNCTIONS, pi=math.pi, __builtins__={})
    fn = eval(compile(src, "<mapspec>", "eval"), env)
    return lambda x: fn(*x)


@dataclass
class MapSpec:
    """A map R^d -> R^m; either expressions or a named builtin.

    Builtins: ``{"builtin": "linear", "u": [...]}`` and
    ``{"builtin": "coordinate", "index": i}`` (1-based).
    """

    exprs: Tuple[str, ...] = ()
    m: int = 1
    builtin: Optional[str] = None
    params: dict = field(default_factory=dict)
    _fn: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.builtin is None:
            if not self.exprs:
                raise MapSpecError("empty map")
            if len(self.exprs) != self.m:
                raise MapSpecError(f"declared m={self.m} but {len(self.exprs)} components given")
            for e in self.exprs:
                try:
                    tree = ast.parse(e.replace("^", "**"), mode="eval")
                except SyntaxError as exc:
                    raise MapSpecError(f"cannot parse {e!r}: {exc.msg}") from None
                _validate(tree)
        elif self.builtin == "linear":
            self.m = 1
            self.params["u"] = list(self.params["u"])
        elif self.builtin == "coordinate":
            self.m = 1
            if int(self.params["index"]) < 1:
                raise MapSpecError("coordinate index is 1-based")
        else:
            raise MapSpecError(f"unknown builtin {self.builtin!r}")

    @property
    def nvars(self) -> int:
        if self.builtin == "linear":
            return len(self.params["u"])
        if self.builtin == "coordinate":
            return int(self.params["index"])
        return max(_validate(ast.parse(e.replace("^", "**"), mode="eval")) for e in self.exprs)

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_fn"] = None
        return state

    def _function(self, nvars: int) -> Callable:
        if self.builtin == "linear":
            u = self.params["u"]
            return lambda x: (sum(a * b for a, b in zip(u, x)),)
        if self.builtin == "coordinate":
            i = int(self.params["index"]) - 1
            return lambda x: (x[i],)
        return _compile(self.exprs, nvars)

    def __call__(self, x) -> tuple:
        if self._fn is None:
            self._fn = self._function(max(self.nvars, len(x)))
        return self._fn(list(x))

    def component(self, i: int) -> Callable:
        return lambda x: self(x)[i]

    def split(self) -> Tuple[Callable, Callable]:
        """(f1, h) for f = f1 (+) h."""
        return (lambda x: self(x)[0]), (lambda x: self(x)[1:])

    def to_dict(self) -> dict:
        if self.builtin:
            return {"builtin": self.builtin, **self.params}
        return {"expr": list(self.exprs) if self.m > 1 else self.exprs[0], "m": self.m}


def mapspec_from_dict(d: dict) -> MapSpec:
    if "builtin" in d:
        params = {k: v for k, v in d.items() if k != "builtin"}
        return MapSpec(builtin=d["builtin"], params=params)
    expr = d.get("expr")
    if isinstance(expr, str):
        exprs = (expr,)
    elif isinstance(expr, (list, tuple)):
        exprs = tuple(str(e) for e in expr)
    else:
        raise MapSpecError("map needs 'expr' or 'builtin'")
    return MapSpec(exprs=exprs, m=int(d.get("m", len(exprs))))
