"""Surface and free group presentations, words and the relator orbit Lambda.

Letters are small integers.  Generator ``k`` contributes the letter ``2k``
and its inverse ``2k + 1``, so ``x ^ 1`` is the inverse of ``x``.  For a
closed surface of genus g the generators are ordered a1, b1, a2, b2, ...,
which gives the letter order a1 < A1 < b1 < B1 < a2 < ... used for shortlex.

A word is a plain tuple of letters.  Word literals are whitespace separated
names with uppercase meaning inverse: ``"a1 b1 A1 B1"``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple[int, ...]

CLOSED = "closed"
FREE = "free"
TORUS = "torus"

_TOKEN = re.compile(r"([a-zA-Z])(\d+)")


def inverse_letter(x: int) -> int:
    return x ^ 1


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != w[i + 1] ^ 1 for i in range(len(w) - 1))


def invert(w: Sequence[int]) -> Word:
    return tuple(x ^ 1 for x in reversed(w))


def concat(u: Sequence[int], v: Sequence[int]) -> Word:
    return free_reduce(tuple(u) + tuple(v))


def cyclic_permutations(w: Sequence[int]) -> set[Word]:
    w = tuple(w)
    return {w[i:] + w[:i] for i in range(len(w))} if w else {()}


@dataclass(frozen=True)
class Presentation:
    kind: str
    rank: int
    names: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    # first two letters of a Lambda word -> that word (unique by Fact 1)
    _by_prefix: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def genus(self) -> int:
        if self.kind != CLOSED:
            raise ValueError("genus is only defined for closed surfaces")
        return self.rank

    @property
    def n_letters(self) -> int:
        return 2 * len(self.names)

    @property
    def letters(self) -> range:
        return range(self.n_letters)

    def letter_name(self, x: int) -> str:
        name = self.names[x >> 1]
        return name.upper() if x & 1 else name

    def parse(self, text: str) -> Word:
        lookup = {}
        for x in self.letters:
            lookup[self.letter_name(x)] = x
        out = []
        for tok in text.replace(",", " ").replace("·", " ").split():
            parts = _TOKEN.findall(tok)
            if not parts or "".join(a + b for a, b in parts) != tok:
                raise ValueError(f"bad letter {tok!r}")
            for a, b in parts:
                if a + b not in lookup:
                    raise ValueError(f"letter {a + b!r} not in alphabet {self.names}")
                out.append(lookup[a + b])
        return tuple(out)

    def format(self, w: Sequence[int]) -> str:
        return " ".join(self.letter_name(x) for x in w)

    # Lambda helpers

    def lambda_word(self, x: int, y: int) -> Word | None:
        """The Lambda word starting with ``x y``, if any."""
        return self._by_prefix.get((x, y))

    def in_lambda_subword(self, w: Sequence[int]) -> bool:
        """True if w is a contiguous subword of some Lambda word."""
        w = tuple(w)
        if len(w) <= 1:
            return len(w) == 0 or bool(self.relators)
        lam = self._by_prefix.get((w[0], w[1]))
        return lam is not None and len(w) <= len(lam) and lam[: len(w)] == w

    def complementary(self, w: Sequence[int]) -> Word:
        """The word lambda' with w . lambda' in Lambda (w a proper Lambda prefix)."""
        w = tuple(w)
        lam = self._by_prefix[(w[0], w[1])]
        if lam[: len(w)] != w:
            raise ValueError("not a Lambda prefix")
        return lam[len(w):]


def _commutator(x: int, y: int) -> Word:
    return (x, y, x ^ 1, y ^ 1)


def make_presentation(kind: str, genus_or_rank: int) -> Presentation:
    if genus_or_rank < 1:
        raise ValueError("genus or rank must be positive")
    if kind == CLOSED:
        g = genus_or_rank
        if g < 2:
            raise ValueError("closed surfaces need genus >= 2")
        names = tuple(f"{c}{i}" for i in range(1, g + 1) for c in "ab")
        rel: Word = ()
        for i in range(g):
            rel += _commutator(4 * i, 4 * i + 2)
        orbit = cyclic_permutations(rel) | cyclic_permutations(invert(rel))
        relators = tuple(sorted(orbit))
        by_prefix: dict = {}
        for lam in relators:
            key = lam[:2]
            if key in by_prefix:
                raise AssertionError("two Lambda words share their first two letters")
            by_prefix[key] = lam
        return Presentation(CLOSED, g, names, relators, by_prefix)
    if kind == FREE:
        names = tuple(f"a{i}" for i in range(1, genus_or_rank + 1))
        return Presentation(FREE, genus_or_rank, names)
    if kind == TORUS:
        if genus_or_rank != 1:
            raise ValueError("the torus presentation has rank 1")
        return Presentation(TORUS, 1, ("e1", "e2"))
    raise ValueError(f"unknown presentation kind {kind!r}")


# Facts 1-3 about Lambda, checked by exhaustion.  Each returns a list of
# counterexamples (empty means the fact holds).

def check_fact1(p: Presentation) -> list:
    bad = []
    for x in p.letters:
        for y in p.letters:
            starts = [lam for lam in p.relators if lam[:2] == (x, y)]
            if len(starts) > 1:
                bad.append(("fact1", p.format((x, y)), len(starts)))
                continue
            # every other Lambda word containing xy (cyclically) is a rotation of it
            for lam in p.relators:
                ext = lam + lam[:1]
                if any(ext[i:i + 2] == (x, y) for i in range(len(lam))):
                    if not starts or lam not in cyclic_permutations(starts[0]):
                        bad.append(("fact1-rotation", p.format((x, y)), p.format(lam)))
    return bad


def check_fact2(p: Presentation) -> list:
    bad = []
    for a in p.letters:
        for side in ("last", "first"):
            if side == "last":
                ws = [lam for lam in p.relators if lam[-1] == a]
                b, c = (ws[0][-2], ws[1][-2]) if len(ws) == 2 else (None, None)
            else:
                ws = [lam for lam in p.relators if lam[0] == a]
                b, c = (ws[0][1], ws[1][1]) if len(ws) == 2 else (None, None)
            if len(ws) != 2:
                bad.append(("fact2-count", side, p.letter_name(a), len(ws)))
            elif p.in_lambda_subword((b ^ 1, c)) or p.in_lambda_subword((c ^ 1, b)):
                bad.append(("fact2-junction", side, p.letter_name(a)))
    return bad


def check_fact3(p: Presentation) -> list:
    bad = []
    for a in p.letters:
        for b in p.letters:
            if not p.in_lambda_subword((a, b)):
                continue
            m1 = [lam for lam in p.relators if lam[0] == b and lam[-1] != a]
            m2 = [lam for lam in p.relators if lam[-1] == a and lam[0] != b]
            if len(m1) != 1 or len(m2) != 1:
                bad.append(("fact3-choice", p.format((a, b)), len(m1), len(m2)))
                continue
            l1, l2 = m1[0][-1], m2[0][0]
            if p.in_lambda_subword((l2 ^ 1, l1 ^ 1)):
                bad.append(("fact3", p.format((a, b))))
    return bad
