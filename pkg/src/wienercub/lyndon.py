"""Lie brackets, Lyndon words, and Lyndon-basis coordinates.

The alphabet {0, 1, ..., d} is ordered with the drift letter first.  A Lyndon
word is strictly smaller than all of its proper rotations; its standard
factorization w = uv (v the longest proper Lyndon suffix) gives the
bracketing [b(u), b(v)] whose expansion in the tensor algebra has w itself
as the lexicographically smallest word, with coefficient 1.  That triangular
structure is what `to_lyndon_coords` eliminates against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .tensoralgebra import FreeTensor, MultiTensor, concat, reduced_unshuffle


def lie_bracket(x: FreeTensor, y: FreeTensor, max_weight=None) -> FreeTensor:
    """[x, y] = xy - yx under concatenation."""
    return concat(x, y, max_weight) - concat(y, x, max_weight)


def is_lyndon(word) -> bool:
    """True when the word is strictly smaller than all its proper rotations."""
    n = len(word)
    if n == 0:
        return False
    for r in range(1, n):
        if word[r:] + word[:r] <= word:
            return False
    return True


def _lyndon_generator(q: int, max_len: int):
    """Duval's algorithm: Lyndon words over {0..q-1} of length <= max_len,
    in lexicographic order."""
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        yield tuple(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == q - 1:
            w.pop()


def standard_factorization(word):
    """Split a Lyndon word of length >= 2 as u, v with v the longest proper
    Lyndon suffix."""
    for start in range(1, len(word)):
        if is_lyndon(word[start:]):
            return word[:start], word[start:]
    raise ValueError(f"{word} has no Lyndon proper suffix; not a Lyndon word?")


def bracketing_of_lyndon(word):
    """Nested-pair bracketing from the standard factorization; letters are leaves."""
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (bracketing_of_lyndon(u), bracketing_of_lyndon(v))


def bracket_tree_tensor(tree, d: int, exact: bool = True) -> FreeTensor:
    """Evaluate a nested-pair bracket tree (ints as leaves) in the tensor algebra."""
    if isinstance(tree, int):
        return FreeTensor.letter(d, tree, exact)
    left, right = tree
    return lie_bracket(bracket_tree_tensor(left, d, exact),
                       bracket_tree_tensor(right, d, exact))


@dataclass(frozen=True)
class LyndonElement:
    """A Lyndon word with its standard bracketing and tensor expansion."""
    word: tuple
    bracketing: object
    expansion: FreeTensor

    def __repr__(self):
        return f"LyndonElement({''.join(str(a) for a in self.word)})"


@lru_cache(maxsize=None)
def _lyndon_table(d: int, max_len: int):
    out = []
    for w in _lyndon_generator(d + 1, max_len):
        tree = bracketing_of_lyndon(w)
        out.append(LyndonElement(w, tree, bracket_tree_tensor(tree, d)))
    return tuple(out)


def lyndon_words(d: int, max_len: int):
    """All Lyndon elements over {0..d} of length <= max_len, lex order."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return list(_lyndon_table(d, max_len))


@lru_cache(maxsize=None)
def _lyndon_by_length(d: int, length: int):
    return tuple(el for el in _lyndon_table(d, length) if len(el.word) == length)


def to_lyndon_coords(x: FreeTensor, tol: float = 0.0) -> dict:
    """Coordinates of a primitive tensor in the Lyndon bracket basis.

    Works degree by degree: the lexicographically smallest remaining word
    must be Lyndon (with unit leading coefficient in its bracket expansion),
    so its coefficient can be read off and eliminated.  A residual whose
    smallest word is not Lyndon means x was not primitive.

    For float tensors, `tol` decides which residual coefficients count as
    zero.  Returns {lyndon word: coefficient}.
    """
    coords = {}
    lengths = sorted({len(w) for w in x.terms})
    for n in lengths:
        if n == 0:
            raise ValueError("primitive tensors have no degree-0 part")
        rest = FreeTensor.zero(x.d, x.exact)
        rest.terms = {w: c for w, c in x.terms.items() if len(w) == n}
        table = {el.word: el for el in _lyndon_by_length(x.d, n)}
        while rest.terms:
            w = min(rest.terms)
            c = rest.terms[w]
            if tol and abs(float(c)) <= tol:
                del rest.terms[w]
                continue
            if w not in table:
                raise ValueError(
                    f"not primitive: leading word {w} is not a Lyndon word "
                    f"(residual {float(c):g})")
            el = table[w]
            expansion = el.expansion if x.exact else el.expansion.to_float()
            rest = rest - c * expansion
            coords[w] = coords.get(w, 0) + c
    return {w: c for w, c in coords.items() if c != 0}


def from_lyndon_coords(coords: dict, d: int, exact: bool = True) -> FreeTensor:
    """Inverse of to_lyndon_coords: expand {lyndon word: coeff} to a tensor."""
    out = FreeTensor.zero(d, exact)
    for w, c in coords.items():
        el_table = {el.word: el for el in _lyndon_by_length(d, len(w))}
        el = el_table[tuple(w)]
        expansion = el.expansion if exact else el.expansion.to_float()
        out = out + c * expansion
    return out


def is_primitive(x: FreeTensor, tol: float = 0.0) -> bool:
    """Vanishing of the 2-fold reduced coproduct, exactly or within tol."""
    return reduced_unshuffle(x, 2).is_zero(tol)


def bracketing_to_json(tree):
    """Nested pair arrays for interop: leaves stay ints."""
    if isinstance(tree, int):
        return tree
    return [bracketing_to_json(tree[0]), bracketing_to_json(tree[1])]


def necklace_count(q: int, n: int) -> int:
    """Number of Lyndon words of length n over q letters:
    (1/n) sum_{k | n} mu(k) q^(n/k)."""

    def mobius(k):
        if k == 1:
            return 1
        result, m, p = 1, k, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                result = -result
            p += 1
        if m > 1:
            result = -result
        return result

    total = 0
    for k in range(1, n + 1):
        if n % k == 0:
            total += mobius(k) * q ** (n // k)
    return total // n


# Reference expansions of the Eulerian idempotent on words of 2..5 distinct
# letters, in nested-bracket form (leaf s is the (s+1)-th letter of the word).
# Transcribed from the classical tables; used as an independent cross-check
# of the series implementation, exact in rationals.
EULERIAN_NESTED_BRACKETS = {
    1: (Fraction(1), ((1, 0),)),
    2: (Fraction(1, 2), ((1, (0, 1)),)),
    3: (Fraction(1, 6), ((1, (0, (1, 2))),
                         (1, ((0, 1), 2)))),
    4: (Fraction(1, 12), ((1, (0, ((1, 2), 3))),
                          (1, ((0, 1), (2, 3))),
                          (1, ((0, 2), (1, 3))),
                          (1, ((0, (1, 2)), 3)))),
    5: (Fraction(1, 60), ((12, (0, (1, (2, (3, 4))))),
                          (9, (0, (1, ((2, 4), 3)))),
                          (6, (0, ((1, 3), (2, 4)))),
                          (6, (0, ((1, (3, 4)), 2))),
                          (6, (0, ((1, 4), (2, 3)))),
                          (2, (0, (((1, 4), 3), 2))),
                          (3, ((0, 2), (1, (3, 4)))),
                          (1, ((0, 2), ((1, 4), 3))),
                          (2, ((0, (2, 3)), (1, 4))),
                          (3, ((0, (2, (3, 4))), 1)),
                          (2, ((0, (2, 4)), (1, 3))),
                          (1, ((0, ((2, 4), 3)), 1)),
                          (3, ((0, 3), (1, (2, 4)))),
                          (1, ((0, 3), ((1, 4), 2))),
                          (-1, (((0, 3), 2), (1, 4))),
                          (-1, (((0, 3), (2, 4)), 1)),
                          (2, ((0, (3, 4)), (1, 2))),
                          (-1, (((0, (3, 4)), 2), 1)),
                          (3, ((0, 4), (1, (2, 3)))),
                          (1, ((0, 4), ((1, 3), 2))),
                          (-1, (((0, 4), 2), (1, 3))),
                          (-1, (((0, 4), (2, 3)), 1)),
                          (-1, (((0, 4), 3), (1, 2))),
                          (-2, ((((0, 4), 3), 2), 1)))),
}


def _substitute_tree(tree, letters):
    if isinstance(tree, int):
        return letters[tree]
    return (_substitute_tree(tree[0], letters), _substitute_tree(tree[1], letters))


def eulerian_bracket_form(word, d: int) -> FreeTensor:
    """e(word) via the nested-bracket reference table (lengths 1..5).

    The table is stated for distinct symbols; substituting the word's actual
    letters into the leaves is valid because both sides are natural in the
    letters.
    """
    n = len(word)
    if n not in EULERIAN_NESTED_BRACKETS:
        raise ValueError("bracket tables cover lengths 1..5")
    scale, rows = EULERIAN_NESTED_BRACKETS[n]
    out = FreeTensor.zero(d)
    for coeff, tree in rows:
        out = out + coeff * bracket_tree_tensor(_substitute_tree(tree, tuple(word)), d)
    return scale * out
