"""Representation data of the supported compact matrix quantum groups.

Each group carries a set of irreducible labels, integer dimensions, a word
length, and fusion rules.  Everything here is exact integer (or rational)
arithmetic; no floats except in the growth-order fit.

Label conventions per group kind:

* ``oplus``/``splus``/``su2``/``so3`` -- labels are non-negative integers
  (the degree of the irreducible).
* ``fdual`` (dual of a free group) -- labels are reduced words, stored as
  tuples of nonzero signed generator indices, e.g. ``(1, -2)`` for
  ``g1 g2^{-1}``.
* ``zd`` (dual of Z^d) -- labels are integer vectors of length d, stored
  as tuples.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LabelMismatchError, NotPolynomialGrowthError

KINDS = ("oplus", "splus", "fdual", "zd", "su2", "so3")

# Groups whose irreducibles are indexed by non-negative integers.
DEGREE_KINDS = ("oplus", "splus", "su2", "so3")

_PARAM_MIN = {"oplus": 2, "splus": 4, "fdual": 2, "zd": 1}


@dataclass(frozen=True)
class GroupDescriptor:
    """Which quantum group is in play, with its integer parameter.

    ``param`` is N for oplus/splus/fdual, d for zd, and 0 for su2/so3.
    """

    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind in _PARAM_MIN:
            if self.param < _PARAM_MIN[self.kind]:
                raise ValueError(
                    f"{self.kind} requires parameter >= {_PARAM_MIN[self.kind]}, "
                    f"got {self.param}"
                )
        elif self.param != 0:
            raise ValueError(f"{self.kind} takes no parameter")

    def __str__(self):
        if self.kind in _PARAM_MIN:
            return f"{self.kind}:{self.param}"
        return self.kind

    @property
    def has_degree_labels(self):
        return self.kind in DEGREE_KINDS


def free_orthogonal(n: int) -> GroupDescriptor:
    return GroupDescriptor("oplus", n)


def free_permutation(n: int) -> GroupDescriptor:
    return GroupDescriptor("splus", n)


def dual_free_group(n: int) -> GroupDescriptor:
    return GroupDescriptor("fdual", n)


def dual_zd(d: int) -> GroupDescriptor:
    return GroupDescriptor("zd", d)


def su2() -> GroupDescriptor:
    return GroupDescriptor("su2")


def so3() -> GroupDescriptor:
    return GroupDescriptor("so3")


def parse_group(selector: str) -> GroupDescriptor:
    """Parse a selector string like ``"oplus:3"``, ``"zd:2"`` or ``"su2"``."""
    selector = selector.strip().lower()
    if ":" in selector:
        kind, _, param = selector.partition(":")
        try:
            return GroupDescriptor(kind, int(param))
        except ValueError as exc:
            raise ValueError(f"bad group selector {selector!r}: {exc}") from exc
    if selector in ("su2", "so3"):
        return GroupDescriptor(selector)
    raise ValueError(f"bad group selector {selector!r}")


# ---------------------------------------------------------------------------
# Reduced words in free groups


def reduce_word(letters) -> tuple:
    """Free reduction: cancel adjacent letter/inverse pairs."""
    out = []
    for x in letters:
        x = int(x)
        if x == 0:
            raise ValueError("word letters must be nonzero signed integers")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_multiply(a: tuple, b: tuple) -> tuple:
    """Product of two reduced words, reduced."""
    out = list(a)
    for x in b:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_inverse(a: tuple) -> tuple:
    return tuple(-x for x in reversed(a))


def word_to_str(word: tuple) -> str:
    """Render a word as space-separated letters, capitals for inverses.

    Generator i maps to the i-th lowercase letter, its inverse to the
    uppercase one: (1, -2, 1) -> "a B a".  Empty word -> "e".
    """
    if not word:
        return "e"
    letters = []
    for x in word:
        if abs(x) > 26:
            raise ValueError("letter serialization supports ranks up to 26")
        c = chr(ord("a") + abs(x) - 1)
        letters.append(c if x > 0 else c.upper())
    return " ".join(letters)


def word_from_str(text: str) -> tuple:
    """Inverse of word_to_str; accepts "a B a" or "aBa", reduces the result."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    raw = text.split() if " " in text else list(text)
    letters = []
    for tok in raw:
        if len(tok) != 1 or not tok.isalpha():
            raise ValueError(f"bad word token {tok!r}")
        idx = ord(tok.lower()) - ord("a") + 1
        letters.append(idx if tok.islower() else -idx)
    return reduce_word(letters)


def check_label(group: GroupDescriptor, label):
    """Validate that ``label`` is a legal irreducible label of ``group``.

    Returns the label in canonical form (int, or tuple of ints).
    """
    if group.has_degree_labels:
        if isinstance(label, bool) or not isinstance(label, (int, np.integer)):
            raise LabelMismatchError(
                f"{group} labels are non-negative integers, got {label!r}"
            )
        if label < 0:
            raise LabelMismatchError(f"{group} labels are non-negative, got {label}")
        return int(label)
    if group.kind == "fdual":
        if not isinstance(label, (tuple, list)):
            raise LabelMismatchError(f"{group} labels are reduced words, got {label!r}")
        word = tuple(int(x) for x in label)
        for x in word:
            if x == 0 or abs(x) > group.param:
                raise LabelMismatchError(
                    f"letter {x} outside generator range 1..{group.param}"
                )
        if word != reduce_word(word):
            raise LabelMismatchError(f"word {word} is not reduced")
        return word
    # zd
    if not isinstance(label, (tuple, list)):
        raise LabelMismatchError(f"{group} labels are integer vectors, got {label!r}")
    vec = tuple(int(x) for x in label)
    if len(vec) != group.param:
        raise LabelMismatchError(
            f"{group} labels have length {group.param}, got {len(vec)}"
        )
    return vec


def trivial_label(group: GroupDescriptor):
    """The label of the trivial representation."""
    if group.has_degree_labels:
        return 0
    if group.kind == "fdual":
        return ()
    return (0,) * group.param


# ---------------------------------------------------------------------------
# Dimensions

# Per-group memo of the dimension recurrence, grown on demand.  Python ints,
# so n_k never overflows (n_k for oplus:3 passes 2^63 in the mid-40s).
# The lock keeps concurrent first computations from interleaving appends.
_dim_memo: dict = {}
_dim_lock = threading.Lock()


def dimension(group: GroupDescriptor, label) -> int:
    """Dimension n_alpha of the irreducible with the given label."""
    label = check_label(group, label)
    if not group.has_degree_labels:
        return 1
    k = label
    if group.kind == "su2":
        return k + 1
    if group.kind == "so3":
        return 2 * k + 1
    memo = _dim_memo.get(group)
    if memo is None or len(memo) <= k:
        with _dim_lock:
            memo = _dim_memo.setdefault(group, [])
            if not memo:
                if group.kind == "oplus":
                    memo.extend([1, group.param])
                else:  # splus
                    memo.extend([1, group.param - 1])
            # oplus: n_{k+1} = N n_k - n_{k-1};  splus: (N-2) n_k - n_{k-1}
            coef = group.param if group.kind == "oplus" else group.param - 2
            while len(memo) <= k:
                memo.append(coef * memo[-1] - memo[-2])
    return memo[k]


def length(group: GroupDescriptor, label) -> int:
    """Natural word length |alpha| of an irreducible label."""
    label = check_label(group, label)
    if group.has_degree_labels:
        return label
    if group.kind == "fdual":
        return len(label)
    return sum(abs(x) for x in label)


# ---------------------------------------------------------------------------
# Fusion


def fusion_decompose(group: GroupDescriptor, a, b) -> dict:
    """Decompose the tensor product a (x) b into irreducibles.

    Returns ``{label: multiplicity}``.  oplus/su2 follow the step-2 ladder
    |a-b|, |a-b|+2, ..., a+b; splus/so3 the full ladder |a-b|, ..., a+b; group
    duals multiply labels.  All multiplicities here are 1.
    """
    a = check_label(group, a)
    b = check_label(group, b)
    if group.has_degree_labels:
        step = 2 if group.kind in ("oplus", "su2") else 1
        return {c: 1 for c in range(abs(a - b), a + b + 1, step)}
    if group.kind == "fdual":
        return {word_multiply(a, b): 1}
    return {tuple(x + y for x, y in zip(a, b)): 1}


def fusion_multiplicity(group: GroupDescriptor, a, b, c) -> int:
    """Structure constant N(a, b, c)."""
    return fusion_decompose(group, a, b).get(check_label(group, c), 0)


def central_product(group: GroupDescriptor, a: dict, b: dict) -> dict:
    """Product of two character-basis expansions.

    For degree-labeled groups the inputs map degree -> coefficient and the
    product expands through fusion: coeff of chi_c picks up a_x * b_y *
    N(x, y, c).  For group duals the same signature performs group-algebra
    convolution on label -> coefficient maps.  Exact when the inputs are
    ints or Fractions.
    """
    out: dict = {}
    for x, ax in a.items():
        for y, by in b.items():
            coeff = ax * by
            for c, mult in fusion_decompose(group, x, y).items():
                out[c] = out.get(c, 0) + coeff * mult
    return {c: v for c, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# Sphere and ball growth


@lru_cache(maxsize=None)
def sphere_size(group: GroupDescriptor, k: int) -> int:
    """s_k = sum of n_alpha^2 over labels of length k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if group.has_degree_labels:
        return dimension(group, k) ** 2
    if group.kind == "fdual":
        n = group.param
        if k == 0:
            return 1
        return 2 * n * (2 * n - 1) ** (k - 1)
    # zd: lattice points with l1 norm exactly k, split by the number i of
    # nonzero coordinates: choose coordinates, signs, and a composition.
    d = group.param
    if k == 0:
        return 1
    return sum(
        (2**i) * math.comb(d, i) * math.comb(k - 1, i - 1)
        for i in range(1, min(d, k) + 1)
    )


def ball_size(group: GroupDescriptor, k: int) -> int:
    """b_k = sum of s_j for j <= k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return sum(sphere_size(group, j) for j in range(k + 1))


def is_polynomial_growth(group: GroupDescriptor) -> bool:
    """True when b_k grows polynomially (zd, oplus:2, splus:4)."""
    return (
        group.kind == "zd"
        or (group.kind == "oplus" and group.param == 2)
        or (group.kind == "splus" and group.param == 4)
    )


def polynomial_growth_order(group: GroupDescriptor) -> int:
    """The integer gamma with b_k ~ (1+k)^gamma, for polynomial-growth groups."""
    if group.kind == "zd":
        return group.param
    if is_polynomial_growth(group):
        return 3  # oplus:2 and splus:4 both have s_k ~ (1+k)^2
    raise NotPolynomialGrowthError(f"{group}: not polynomial growth")


def sphere_poly_bound(group: GroupDescriptor) -> tuple:
    """Analytic bound s_k <= C (1+k)^deg for polynomial-growth groups.

    Returns (C, deg).  Used by tail certificates; the bounds are crude but
    provable: zd uses s_k <= (3^d - 1)(1+k)^{d-1}, oplus:2 is exact, splus:4
    uses (2k+1)^2 <= 4 (1+k)^2.
    """
    if group.kind == "zd":
        d = group.param
        return (max(3**d - 1, 1), d - 1)
    if group.kind == "oplus" and group.param == 2:
        return (1, 2)
    if group.kind == "splus" and group.param == 4:
        return (4, 2)
    raise NotPolynomialGrowthError(f"{group}: not polynomial growth")


def growth_order_estimate(group: GroupDescriptor, kmax: int) -> float:
    """Least-squares slope of log b_k against log(1+k) over k in [kmax/2, kmax]."""
    if kmax < 8:
        raise ValueError("kmax must be >= 8")
    if not is_polynomial_growth(group):
        raise NotPolynomialGrowthError(f"{group}: not polynomial growth")
    ks = np.arange(kmax // 2, kmax + 1)
    b = np.cumsum([sphere_size(group, int(j)) for j in range(kmax + 1)])
    x = np.log1p(ks)
    y = np.log([float(b[k]) for k in ks])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Enumeration helpers (desk-scale only)


def sphere_labels(group: GroupDescriptor, k: int) -> list:
    """All labels of length exactly k.  Only for degree or zd groups.

    Free-group spheres grow exponentially; use freegroup.enumerate_ball for
    those (with its size guard).
    """
    if group.has_degree_labels:
        return [k]
    if group.kind == "zd":
        d = group.param
        out = []

        def rec(prefix, remaining, coords_left):
            if coords_left == 1:
                for v in (remaining, -remaining) if remaining else (0,):
                    out.append(tuple(prefix + [v]))
                return
            for mag in range(remaining + 1):
                for v in (mag, -mag) if mag else (0,):
                    rec(prefix + [v], remaining - mag, coords_left - 1)

        rec([], k, d)
        return sorted(set(out))
    raise ValueError(f"sphere_labels does not enumerate {group}; use freegroup.enumerate_ball")
