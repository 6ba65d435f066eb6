"""Growth criteria for distortion and word-length certificates.

Growth models are c * n^a * (log n)^b.  Limits are decided on the symbolic
part only; a model given by a finite table of values gets the verdict
``None`` (indeterminate) together with a trend summary.
"""
from __future__ import annotations

import ast
import math
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .symbolic import Symbolic, exact, fmt, log_interval, sym

# -- growth models -----------------------------------------------------------


@dataclass(frozen=True)
class GrowthModel:
    c: Fraction | None = Fraction(1)
    a: Fraction | None = Fraction(0)
    b: Fraction | None = Fraction(0)
    prefix: tuple = ()  # ((n, d_n), ...) exact values

    def __post_init__(self):
        if self.symbolic:
            if self.c <= 0:
                raise ValueError("coefficient must be positive")
            if self.a < 0:
                raise ValueError("power must be >= 0")
        for _, v in self.prefix:
            if v <= 0:
                raise ValueError("prefix values must be positive")

    @property
    def symbolic(self) -> bool:
        return self.c is not None and self.a is not None and self.b is not None

    @property
    def unbounded(self) -> bool:
        return self.a > 0 or (self.a == 0 and self.b > 0)

    def __str__(self) -> str:
        if not self.symbolic:
            return f"prefix[{len(self.prefix)}]"
        s = [] if self.c == 1 else [f"({fmt(self.c)})"]
        if self.a:
            s.append("n" if self.a == 1 else f"n^({fmt(self.a)})")
        if self.b:
            s.append(f"log(n)^({fmt(self.b)})")
        return "*".join(s) or "1"


def prefix_model(values: Mapping[int, Fraction] | Sequence) -> GrowthModel:
    items = values.items() if isinstance(values, Mapping) else enumerate(values, start=1)
    return GrowthModel(None, None, None, tuple((int(n), Fraction(v)) for n, v in items))


_FACTOR = re.compile(
    r"^(?:\(?(?P<num>[0-9./]+)\)?|n(?:\^\(?(?P<a>-?[0-9./]+)\)?)?|log\(n\)(?:\^\(?(?P<b>-?[0-9./]+)\)?)?)$"
)


def parse_growth(text: str) -> GrowthModel:
    """Parse products such as ``n^0.5``, ``2*n*log(n)^-2`` or ``1``."""
    c, a, b = Fraction(1), Fraction(0), Fraction(0)
    src = text.replace(" ", "").replace("**", "^").replace("ln(n)", "log(n)")
    if not src:
        raise ValueError("empty growth expression")
    for part in src.split("*"):
        m = _FACTOR.match(part)
        if not m:
            raise ValueError(f"cannot parse growth factor {part!r}")
        if m.group("num") is not None:
            c *= Fraction(m.group("num"))
        elif part.startswith("n"):
            a += Fraction(m.group("a") or 1)
        else:
            b += Fraction(m.group("b") or 1)
    return GrowthModel(c, a, b)


def _lex_negative(vec) -> bool:
    for v in vec:
        if v != 0:
            return v < 0
    return False


def _dlogd_class(d: GrowthModel) -> tuple[Fraction, Fraction, int]:
    """Exponents (A, B, C) of n^A (log n)^B (log log n)^C equivalent to |d log d|."""
    if d.a > 0:
        return d.a, d.b + 1, 0
    if d.b != 0:
        return Fraction(0), d.b, 1
    return Fraction(0), Fraction(0), 0


def criterion_sublinear(g: GrowthModel) -> bool | None:
    """d_n / n -> 0."""
    if not g.symbolic:
        return None
    return _lex_negative((g.a - 1, g.b))


def criterion_wn(d: GrowthModel, w: GrowthModel) -> bool | None:
    """d_n log d_n / w_n -> 0 (liminf equals lim for power-log models)."""
    if not d.symbolic or not w.symbolic:
        return None
    if not w.unbounded:
        raise ValueError("w_n must tend to infinity")
    A, B, C = _dlogd_class(d)
    if (A, B, C) == (0, 0, 0):
        # bounded d: d log d is constant
        return True
    return _lex_negative((A - w.a, B - w.b, C))


def criterion_nlogn(g: GrowthModel) -> bool | None:
    return criterion_wn(g, GrowthModel(Fraction(1), Fraction(1), Fraction(0)))


def trend_report(g: GrowthModel) -> dict:
    """Descriptive statistics of a finite prefix; never a limit verdict."""
    pts = sorted(g.prefix)
    if not pts:
        return {"points": 0}
    ratios = [(n, v / n) for n, v in pts if n > 0]
    half = len(ratios) // 2
    early = max((r for _, r in ratios[: max(half, 1)]), default=None)
    late = max((r for _, r in ratios[half:]), default=None)
    return {
        "points": len(pts),
        "last_ratio": exact(ratios[-1][1]) if ratios else None,
        "early_max_ratio": exact(early) if early is not None else None,
        "late_max_ratio": exact(late) if late is not None else None,
        "ratio_shrinking": bool(early is not None and late is not None and late < early),
    }


# -- Avila word encoding -----------------------------------------------------

def avila_enumerate(n: int) -> str:
    """The n-th word over {a, b} in length-then-lexicographic order (1 -> empty)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    length = n.bit_length() - 1
    idx = n - (1 << length)
    return format(idx, f"0{length}b").translate(str.maketrans("01", "ab")) if length else ""


def avila_index(word: str) -> int:
    return (1 << len(word)) + (int(word.translate(str.maketrans("ab", "01")), 2) if word else 0)


def avila_bound(n: int) -> int:
    """Word-length certificate 14 * length(m_n) + 14, i.e. 14 floor(log2 n) + 14."""
    return 14 * len(avila_enumerate(n)) + 14


# -- psi indexing and sigma schedules ----------------------------------------

def psi_index(i: int, j: int, k: Sequence[int]) -> int:
    """i + sum_{j' < j} k_sigma(j'); ``k`` lists the block sizes k_sigma(1), k_sigma(2), ..."""
    if not 1 <= j <= len(k):
        raise ValueError("block index out of range")
    if not 1 <= i <= k[j - 1]:
        raise ValueError(f"i={i} outside block {j}")
    return i + sum(k[: j - 1])


def psi_inverse(idx: int, k: Sequence[int]) -> tuple[int, int]:
    if idx < 1:
        raise ValueError("index must be >= 1")
    for j, size in enumerate(k, start=1):
        if idx <= size:
            return idx, j
        idx -= size
    raise ValueError("index beyond the listed blocks")


_SAFE = {
    "sqrt": math.sqrt, "ceil": math.ceil, "floor": math.floor, "log": math.log,
    "log2": math.log2, "min": min, "max": max, "isqrt": math.isqrt,
}
_OPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.FloorDiv: operator.floordiv, ast.Pow: operator.pow,
    ast.Mod: operator.mod,
}


def compile_formula(text: str) -> Callable[[int], int]:
    """Integer-valued formula in ``n`` (e.g. ``ceil(sqrt(n))``); no names beyond a few math functions."""
    tree = ast.parse(str(text), mode="eval")

    def ev(node, n):
        if isinstance(node, ast.Expression):
            return ev(node.body, n)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id == "n":
            return n
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left, n), ev(node.right, n))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand, n)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _SAFE:
            return _SAFE[node.func.id](*(ev(a, n) for a in node.args))
        raise ValueError(f"unsupported expression in {text!r}")

    def f(n: int) -> int:
        v = ev(tree, n)
        if v != int(v):
            raise ValueError(f"{text!r} is not an integer at n={n}")
        return int(v)

    return f


@dataclass
class DecompositionProfile:
    l: Callable[[int], int]
    k: Callable[[int], int]
    description: str = ""

    @classmethod
    def from_spec(cls, spec: Mapping) -> "DecompositionProfile":
        def one(v):
            if isinstance(v, list):
                vals = [int(x) for x in v]
                return lambda n: vals[n - 1]
            return compile_formula(v)

        return cls(one(spec["l"]), one(spec["k"]), f"l={spec['l']!r}, k={spec['k']!r}")

    def check(self, n: int) -> bool:
        """Raise unless l_n, k_n >= 1; return whether k_n <= l_n also holds."""
        l, k = self.l(n), self.k(n)
        if l < 1 or k < 1:
            raise ValueError(f"profile needs l_n, k_n >= 1 at n={n}: l={l}, k={k}")
        return k <= l


class SigmaFailure(RuntimeError):
    def __init__(self, m: int, horizon: int):
        super().__init__(f"no admissible sigma({m + 1}) <= {horizon}; blocked at m={m}")
        self.m = m
        self.horizon = horizon


def _log2_le(s: int, q: Fraction) -> bool:
    """Exact test of log2(s) <= q for an integer s >= 1."""
    if q < 0:
        return False
    num, den = q.numerator, q.denominator
    bl = s.bit_length()
    # s^den has between den*(bl-1)+1 and den*bl bits
    if num >= den * bl:
        return True
    if num < den * (bl - 1):
        return False
    return s ** den <= 1 << num


def sigma_inequality(l: int, s: int, sigma: int, m: int) -> bool:
    """Exact check of l * (14 log2 s + 14) / sigma <= 1/m."""
    q = Fraction(sigma - 14 * m * l, 14 * m * l)
    return _log2_le(s, q)


@dataclass(frozen=True)
class SigmaSchedule:
    sigma: tuple[int, ...]
    witnesses: tuple[dict, ...]
    horizon: int
    k_above_l: tuple[int, ...] = ()  # selected indices with k_n > l_n


def build_sigma(profile: DecompositionProfile, horizon: int, terms: int = 8) -> SigmaSchedule:
    """Greedy minimal sigma with sigma(1) = 1.

    For m >= 1, sigma(m+1) is the least index above sigma(m) with
    l_{sigma(m+1)} (14 log2(sum_{i<=m+1} k_sigma(i)) + 14) / sigma(m+1) <= 1/m.
    """
    if horizon < 1 or terms < 1:
        raise ValueError("horizon and terms must be positive")
    sigma = [1]
    loose = [] if profile.check(1) else [1]
    ksum = profile.k(1)
    witnesses = []
    for m in range(1, terms):
        found = None
        for cand in range(sigma[-1] + 1, horizon + 1):
            l = profile.l(cand)
            s = ksum + profile.k(cand)
            lhs = m * l * (14 * math.log2(s) + 14)
            if lhs > cand * (1 + 1e-9):
                continue
            if sigma_inequality(l, s, cand, m):
                if not profile.check(cand):
                    loose.append(cand)
                found = cand
                break
        if found is None:
            raise SigmaFailure(m, horizon)
        l = profile.l(found)
        ksum += profile.k(found)
        sigma.append(found)
        q = Fraction(found - 14 * m * l, 14 * m * l)
        witnesses.append({
            "m": m,
            "sigma": found,
            "l": l,
            "k_sum": ksum,
            "inequality": f"{l}*(14*log2({ksum})+14)/{found} <= 1/{m}",
            "exact_form": f"{ksum}^{q.denominator} <= 2^{q.numerator}",
            "lhs": l * (14 * math.log2(ksum) + 14) / found,
            "rhs": 1 / m,
        })
    return SigmaSchedule(tuple(sigma), tuple(witnesses), horizon, tuple(loose))


def verify_sigma(schedule: SigmaSchedule, profile: DecompositionProfile) -> list[int]:
    """Re-check every witness from scratch; returns the failing m values."""
    bad = []
    sig = schedule.sigma
    if any(b <= a for a, b in zip(sig, sig[1:])):
        bad.append(0)
    for m in range(1, len(sig)):
        s = sum(profile.k(x) for x in sig[: m + 1])
        if not sigma_inequality(profile.l(sig[m]), s, sig[m], m):
            bad.append(m)
    return bad


def a_value(l: int, k: int) -> tuple[Fraction, Fraction]:
    """Enclosure of l * log k (natural log), the a_U quantity of one decomposition."""
    lo, hi = log_interval(k)
    return l * lo, l * hi


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class CertificateSet:
    surface: str
    value: int
    upper: Symbolic
    lower: Symbolic
    source: tuple[str, ...] = field(default=())


def frag_certificates(surface: str, diam_or_el: int, genus: int | None = None) -> CertificateSet:
    """Upper and lower bounds on the fragmentation length.

    ``surface`` is ``boundary``, ``torus`` or ``closed`` (then ``genus`` is
    needed and the argument is the eloignement).
    """
    x = int(diam_or_el)
    if x < 0:
        raise ValueError("diameter / eloignement must be >= 0")
    lower = Symbolic.of({"1/C": x - 2})
    if surface == "boundary":
        return CertificateSet(surface, x, Symbolic.of({"": 3 * x + 3}), lower, ("fragbord", "equiv"))
    if surface == "torus":
        upper = sym("C") * (4 * x) + sym("C'")
        return CertificateSet(surface, x, upper, lower, ("hertore", "intore", "equiv"))
    if surface == "closed":
        if genus is None or genus < 2:
            raise ValueError("closed surfaces need genus >= 2")
        steps = max(x - 4 * genus, 0)
        upper = Symbolic.of({"": (8 * genus - 2) * steps}) + sym("C'")
        return CertificateSet(f"closed(g={genus})", x, upper, lower, ("herhyp", "inhyp", "equiv"))
    raise ValueError(f"unknown surface {surface!r}")


def classical_certificates(kind: str, n: int, p: int | None = None) -> int:
    """Word-length bound: 2n+1 for a^(p^n) in BS(1,p), 4n for c^(n^2) in Heisenberg."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "baumslag":
        if p is None or abs(p) <= 1:
            raise ValueError("Baumslag-Solitar needs |p| >= 2")
        return 2 * n + 1
    if kind == "heisenberg":
        return 4 * n
    raise ValueError(f"unknown group {kind!r}")


def baumslag_witness(p: int, n: int) -> str:
    return " ".join(["b"] * n + ["a"] + ["B"] * n)


def heisenberg_witness(n: int) -> str:
    return " ".join(["a"] * n + ["b"] * n + ["A"] * n + ["B"] * n)


def verify_baumslag(p: int, n: int) -> bool:
    """b^n a b^-n = a^(p^n) in the affine model a: x -> x+1, b: x -> p x."""
    def compose(f, g):
        return (f[0] * g[0], f[0] * g[1] + f[1])

    gens = {"a": (Fraction(1), Fraction(1)), "A": (Fraction(1), Fraction(-1)),
            "b": (Fraction(p), Fraction(0)), "B": (Fraction(1, p), Fraction(0))}
    m = (Fraction(1), Fraction(0))
    for x in baumslag_witness(p, n).split():
        m = compose(m, gens[x])
    return m == (Fraction(1), Fraction(p) ** n)


def verify_heisenberg(n: int) -> bool:
    """[a^n, b^n] = c^(n^2) with integer unitriangular matrices."""
    def mul(x, y):
        return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)) for i in range(3))

    def unit(i, j, v):
        m = [[int(r == c) for c in range(3)] for r in range(3)]
        m[i][j] = v
        return tuple(map(tuple, m))

    gens = {"a": unit(0, 1, 1), "A": unit(0, 1, -1), "b": unit(1, 2, 1), "B": unit(1, 2, -1)}
    m = unit(0, 0, 1)
    for x in heisenberg_witness(n).split():
        m = mul(m, gens[x])
    return m == unit(0, 2, n * n)


@dataclass(frozen=True)
class ABound:
    lam: int
    coefficient: int  # 12 lambda - 6, multiplying log 18

    def interval(self) -> tuple[Fraction, Fraction]:
        lo, hi = log_interval(18)
        return self.coefficient * lo, self.coefficient * hi

    def __str__(self) -> str:
        return f"{self.coefficient}*log(18)"


def a_bound_from_lambda(lam: int) -> ABound:
    """(12 lambda - 6) log 18, natural logarithm."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    return ABound(lam, 12 * lam - 6)


def diameter_upper_from_word_length(l_n, mu, delta_d) -> Fraction:
    """d <= l_n mu + delta(D) + l_n mu."""
    l_n, mu, delta_d = Fraction(l_n), Fraction(mu), Fraction(delta_d)
    if l_n < 0 or mu < 0 or delta_d < 0:
        raise ValueError("arguments must be >= 0")
    return 2 * l_n * mu + delta_d
