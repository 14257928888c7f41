"""Finite words over a fixed alphabet and the symbolic tree they span.

Words index the pieces of a Moran construction: the word ``(i1, ..., in)``
names the piece reached by following branch ``i1`` at level 1, ``i2`` at
level 2, and so on.  Everything here is exact combinatorics -- the only
metric content is the dyadic tree metric ``d2`` and the diameter values
supplied by a caller's model.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import DomainError, EnumerationCapError

#: A finite word: a tuple of symbol indices.
Word = tuple[int, ...]

#: A weight on words, e.g. ``diam(piece)**t``.
WeightFunction = Callable[[Word], float]

_DEFAULT_ENUM_CAP = 2**24


def enum_cap() -> int:
    """Hard cap on the number of words any operation may enumerate.

    Defaults to ``2**24`` and can be overridden through the
    ``MORANLAB_ENUM_CAP`` environment variable.
    """
    raw = os.environ.get("MORANLAB_ENUM_CAP")
    if raw is None:
        return _DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise EnumerationCapError("MORANLAB_ENUM_CAP is not an integer: %r" % raw) from exc
    if cap <= 0:
        raise EnumerationCapError("MORANLAB_ENUM_CAP must be positive")
    return cap


def _check_enum(count: int, what: str) -> None:
    cap = enum_cap()
    if count > cap:
        raise EnumerationCapError("%s would enumerate %d words (cap %d)" % (what, count, cap))


@dataclass(frozen=True)
class Alphabet:
    """The branch set ``I = {0, ..., size-1}`` shared by every level."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 2:
            raise ValueError("alphabet needs at least two symbols, got %d" % self.size)

    def symbols(self) -> range:
        return range(self.size)

    def check_word(self, word: Sequence[int]) -> Word:
        w = tuple(word)
        for s in w:
            if not 0 <= s < self.size:
                raise DomainError("symbol %r outside alphabet of size %d" % (s, self.size))
        return w

    def words(self, length: int) -> Iterator[Word]:
        """All words of exactly ``length`` symbols, in lexicographic order."""
        if length < 0:
            raise DomainError("length must be non-negative")
        _check_enum(self.size**length, "level %d" % length)
        return itertools.product(range(self.size), repeat=length)

    def words_up_to(self, depth: int) -> Iterator[Word]:
        """All non-empty words of length at most ``depth``, tree order."""
        for n in range(1, depth + 1):
            yield from self.words(n)


def parent(word: Word) -> Word:
    """Drop the last symbol.  The empty word has no parent."""
    if len(word) == 0:
        raise DomainError("the empty word has no parent")
    return word[:-1]


def is_prefix(u: Word, v: Word) -> bool:
    return len(u) <= len(v) and v[: len(u)] == u


def incomparable(u: Word, v: Word) -> bool:
    """True iff neither word is a prefix of the other.

    Incomparable words name pieces on different branches of the tree;
    comparable words name nested pieces.
    """
    m = min(len(u), len(v))
    return u[:m] != v[:m]


def word_str(word: Word) -> str:
    """Deterministic display form used in CSV/JSON output."""
    return "-".join(str(s) for s in word) if word else "()"


# ---------------------------------------------------------------------------
# the dyadic tree metric
# ---------------------------------------------------------------------------


def d2_with_resolution(u: Word, v: Word) -> tuple[float, bool]:
    """Tree distance ``2**(1-k)`` at first disagreement index ``k``.

    Both arguments are depth-``n`` prefixes of infinite branches.  If they
    disagree somewhere the distance is exact and the flag is ``True``.  If
    they agree on the whole declared depth, the true distance is merely
    known to be at most ``2**(-n)``; we return ``0.0`` with flag ``False``
    (unresolved at this depth).
    """
    if len(u) != len(v):
        raise DomainError("prefixes must have equal declared depth (%d vs %d)" % (len(u), len(v)))
    for k, (a, b) in enumerate(zip(u, v), start=1):
        if a != b:
            return 2.0 ** (1 - k), True
    return 0.0, False


def d2(u: Word, v: Word) -> float:
    """The tree metric value; see :func:`d2_with_resolution`."""
    return d2_with_resolution(u, v)[0]


# ---------------------------------------------------------------------------
# sub-trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubTree:
    """A level-wise pruned tree: keep the first ``b_k`` branches at level k.

    ``branch_counts[k-1]`` is the number of children retained at level k;
    the retained words of length n are exactly those with ``i_k < b_k`` for
    every k <= n.  This is the shape produced by the greedy branch-sequence
    constructions, where at each level either the full branch set or a
    deterministic initial segment of it survives.
    """

    branch_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(b) for b in self.branch_counts)
        object.__setattr__(self, "branch_counts", counts)
        for k, b in enumerate(counts, start=1):
            if b < 1:
                raise ValueError("branch count at level %d must be >= 1, got %d" % (k, b))

    @property
    def depth(self) -> int:
        return len(self.branch_counts)

    def check_alphabet(self, alphabet: Alphabet) -> None:
        for k, b in enumerate(self.branch_counts, start=1):
            if b > alphabet.size:
                raise DomainError(
                    "branch count %d at level %d exceeds alphabet size %d"
                    % (b, k, alphabet.size)
                )

    def branch(self, level: int) -> int:
        if not 1 <= level <= self.depth:
            raise DomainError("level %d outside declared depth %d" % (level, self.depth))
        return self.branch_counts[level - 1]

    def count(self, level: int) -> int:
        """Number of retained words of length ``level``."""
        out = 1
        for k in range(1, level + 1):
            out *= self.branch(k)
        return out

    def contains(self, word: Word) -> bool:
        if len(word) > self.depth:
            return False
        return all(s < self.branch(k) for k, s in enumerate(word, start=1))

    def words(self, length: int) -> Iterator[Word]:
        if not 0 <= length <= self.depth:
            raise DomainError("length %d outside declared depth %d" % (length, self.depth))
        _check_enum(self.count(length), "sub-tree level %d" % length)
        return itertools.product(*(range(self.branch(k)) for k in range(1, length + 1)))

    def to_json(self) -> dict:
        return {"branch_counts": list(self.branch_counts)}

    @classmethod
    def from_json(cls, data: dict) -> "SubTree":
        return cls(tuple(data["branch_counts"]))


# ---------------------------------------------------------------------------
# stopping sets
# ---------------------------------------------------------------------------


def stopping_set(model, r: float, max_depth: int = 64) -> list[Word]:
    """Words whose piece first drops to diameter ``<= r``.

    Returns the antichain ``{i : diam(X_i) <= r < diam(X_parent(i))}`` in
    lexicographic order.  ``model`` is any object with ``alphabet``,
    ``seed_diameter`` and ``diam(word)``.

    The boundary is inclusive on the word itself: at ``r == diam(X_i)``
    the word ``i`` belongs to the stopping set.
    """
    if not 0 < r < model.seed_diameter:
        raise DomainError(
            "stopping radius must lie in (0, seed diameter); got r=%r, seed=%r"
            % (r, model.seed_diameter)
        )
    out: list[Word] = []

    def visit(word: Word) -> None:
        dw = model.diam(word)
        if dw <= r:
            out.append(word)
            return
        if len(word) >= max_depth:
            raise DomainError(
                "piece diameters did not drop below r=%r within depth %d" % (r, max_depth)
            )
        for s in model.alphabet.symbols():
            visit(word + (s,))

    for s in model.alphabet.symbols():
        visit((s,))
    return out


@dataclass(frozen=True)
class LocalStoppingSet:
    """Result of :func:`local_stopping_set`.

    ``words`` is the (sample-based, hence possibly under-reported) set of
    stopping words whose piece meets the open ball; ``candidates`` is the
    full stopping set at this radius, and ``sample_counts[i]`` records how
    many cloud points witnessed ``candidates[i]``.
    """

    words: tuple[Word, ...]
    candidates: tuple[Word, ...]
    sample_counts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.words)


def local_stopping_set(model, cloud, x, r: float) -> LocalStoppingSet:
    """Stopping words whose sampled piece meets the open ball ``B(x, r)``.

    A piece ``X_i`` is approximated by the cloud points whose label starts
    with ``i``; it is kept when some sample point lies at distance
    strictly less than ``r`` from ``x``.  The approximation is one-sided:
    sampling can only miss intersections, never invent them.
    """
    candidates = stopping_set(model, r)
    depth = cloud.depth
    for w in candidates:
        if len(w) > depth:
            raise DomainError(
                "stopping word %s is deeper than the cloud (depth %d); "
                "regenerate the cloud at depth >= %d" % (word_str(w), depth, len(w))
            )
    lengths = sorted({len(w) for w in candidates})
    index = {w: k for k, w in enumerate(candidates)}
    hit = [False] * len(candidates)
    counts = [0] * len(candidates)
    dist = cloud.space.distance
    for label, point in cloud.items():
        for n in lengths:
            k = index.get(label[:n])
            if k is not None:
                counts[k] += 1
                if not hit[k] and dist(point, x) < r:
                    hit[k] = True
                break
    words = tuple(w for w, h in zip(candidates, hit) if h)
    return LocalStoppingSet(words, tuple(candidates), tuple(counts))


# ---------------------------------------------------------------------------
# exact antichain covering cost
# ---------------------------------------------------------------------------


def antichain_cover_cost(
    alphabet: Alphabet, psi: WeightFunction, n: int, max_depth: int
) -> float:
    """Cheapest antichain cover of the whole branch space, exactly.

    Minimises ``sum(psi(i) for i in C)`` over all covers ``C`` of the full
    tree by words of length between ``n`` and ``max_depth``.  Because the
    covered set is the entire branch space, an optimal cover may be taken
    to be an antichain and the minimum satisfies the exact recursion::

        cost(v) = psi(v)                         if len(v) == max_depth
        cost(v) = min(psi(v), sum over children) if len(v) >= n
        cost(v) = sum over children              if len(v) < n

    evaluated at the root.  (For proper subsets of the branch space the
    recursion would not be exact; this routine is deliberately restricted
    to the full space.)
    """
    if not 1 <= n <= max_depth:
        raise DomainError("need 1 <= n <= max_depth, got n=%d, max_depth=%d" % (n, max_depth))
    _check_enum(alphabet.size**max_depth, "cover tree of depth %d" % max_depth)

    def cost(word: Word) -> float:
        if len(word) == max_depth:
            return psi(word)
        kids = sum(cost(word + (s,)) for s in alphabet.symbols())
        if len(word) >= n:
            return min(psi(word), kids)
        return kids

    return cost(())
