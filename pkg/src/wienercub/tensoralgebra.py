"""Sparse free tensor algebra over the alphabet {0, 1, ..., d}.

Words are tuples of integer letters; letter 0 is the drift letter and counts
twice in the inhomogeneous weight (a word with i zeros among n letters has
weight n + i).  FreeTensor holds a finite linear combination of words with
either exact rational or float coefficients, never both.  All operations are
pure: no function mutates its arguments, and returned tensors share no
mutable state with their inputs.

The Hopf structure implemented here is the unshuffle coproduct (dual to the
shuffle product) together with the concatenation product.  The convention
for the coproduct of the empty word is unshuffle(1) = 0; the counital
variant with full_coproduct(1) = 1 (x) 1 is exposed separately because the
bialgebra axioms are stated for it.

The Eulerian idempotent e = log-under-convolution of the identity map is the
canonical projection onto the free Lie algebra; `eulerian`, `eulerian_power`
and `reconstruct` give e, its convolution powers e^(*k), and the inverse
isomorphism sum_k e^(*k)/k!.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product

Scalar = object  # Fraction for exact tensors, float otherwise
Word = tuple


def word_weight(word) -> int:
    """Inhomogeneous weight of a word: the drift letter 0 counts twice."""
    return len(word) + word.count(0)


def words_up_to_weight(d: int, m: int):
    """Iterate all words over {0..d} of weight <= m, shortest first."""
    for length in range(m + 1):
        for w in product(range(d + 1), repeat=length):
            if word_weight(w) <= m:
                yield w


def truncated_algebra_dim(d: int, m: int) -> int:
    """Dimension of the weight-<=m truncation, i.e. the number of words.

    Counts words with i nonzero letters and j zeros, i + 2j <= m, which is
    sum over lengths k of C(k, j) * d^(k-j).
    """
    total = 0
    for i in range(m + 1):
        for j in range(min(m - i, i) + 1):
            total += math.comb(i, j) * d ** (i - j)
    return total


def _coerce_exact(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact tensor requires int or Fraction coefficients, got {type(c).__name__}")


def _coerce_float(c):
    if isinstance(c, float):
        return c
    if isinstance(c, int):
        return float(c)
    raise TypeError(f"float tensor requires real coefficients, got {type(c).__name__}")


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class FreeTensor:
    """A sparse element of the tensor algebra over letters {0, ..., d}.

    terms maps words (tuples of letters) to nonzero coefficients. `exact`
    selects the scalar kind: Fraction when True, float when False.
    `truncation_weight` records the weight bound the tensor is known to be
    truncated to (None means untruncated); stored words always have weight
    at most that bound.
    """

    __slots__ = ("d", "exact", "terms", "truncation_weight")

    def __init__(self, d, terms=None, exact=True, truncation_weight=None):
        self.d = d
        self.exact = exact
        self.truncation_weight = truncation_weight
        coerce = _coerce_exact if exact else _coerce_float
        out = {}
        if terms:
            for w, c in terms.items():
                w = tuple(w)
                c = coerce(c)
                if c == 0:
                    continue
                if any(not (0 <= a <= d) for a in w):
                    raise ValueError(f"word {w} has letters outside 0..{d}")
                if truncation_weight is not None and word_weight(w) > truncation_weight:
                    continue
                out[w] = c
        self.terms = out

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, d, exact=True):
        return cls(d, {}, exact=exact)

    @classmethod
    def unit(cls, d, exact=True):
        one = Fraction(1) if exact else 1.0
        return cls(d, {(): one}, exact=exact)

    @classmethod
    def letter(cls, d, i, exact=True):
        one = Fraction(1) if exact else 1.0
        return cls(d, {(i,): one}, exact=exact)

    @classmethod
    def from_word(cls, d, word, coeff=1, exact=True):
        return cls(d, {tuple(word): coeff}, exact=exact)

    # ---- basic queries -------------------------------------------------

    def coefficient(self, word):
        zero = Fraction(0) if self.exact else 0.0
        return self.terms.get(tuple(word), zero)

    def is_zero(self, tol=0.0):
        if not self.terms:
            return True
        if tol == 0.0:
            return False
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs(self):
        if not self.terms:
            return 0.0
        return max(abs(float(c)) for c in self.terms.values())

    def max_word_weight(self):
        if not self.terms:
            return 0
        return max(word_weight(w) for w in self.terms)

    def max_word_length(self):
        if not self.terms:
            return 0
        return max(len(w) for w in self.terms)

    def degree0(self):
        """Coefficient of the empty word."""
        return self.coefficient(())

    def to_float(self):
        if not self.exact:
            return self
        return FreeTensor(self.d, {w: float(c) for w, c in self.terms.items()},
                          exact=False, truncation_weight=self.truncation_weight)

    # ---- arithmetic ----------------------------------------------------

    def _check_compatible(self, other):
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")
        if self.exact != other.exact:
            raise ValueError("cannot mix exact and float tensors")

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
        t = FreeTensor.zero(self.d, self.exact)
        t.terms = out
        t.truncation_weight = _min_trunc(self.truncation_weight, other.truncation_weight)
        return t

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        return self.__mul__(scalar)

    def __mul__(self, scalar):
        if self.exact:
            scalar = _coerce_exact(scalar)
        else:
            scalar = _coerce_float(scalar)
        if scalar == 0:
            return FreeTensor(self.d, {}, self.exact, self.truncation_weight)
        t = FreeTensor.zero(self.d, self.exact)
        t.terms = {w: c * scalar for w, c in self.terms.items()}
        t.truncation_weight = self.truncation_weight
        return t

    def __eq__(self, other):
        if not isinstance(other, FreeTensor):
            return NotImplemented
        return self.d == other.d and self.exact == other.exact and self.terms == other.terms

    def __repr__(self):
        kind = "rational" if self.exact else "float"
        return f"FreeTensor(d={self.d}, {kind}, {len(self.terms)} terms)"

    def pretty(self, max_terms=None):
        """Human-readable sum, words sorted length-lexicographically."""
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        if max_terms is not None:
            items = items[:max_terms]
        parts = []
        for w, c in items:
            word = "".join(str(a) for a in w) if w else "1"
            parts.append(f"({c})*{word}" if w else f"({c})")
        return " + ".join(parts)


def max_coeff_diff(a: FreeTensor, b: FreeTensor):
    """Largest |coefficient difference| between two tensors, with its word."""
    if a.d != b.d:
        raise ValueError("dimension mismatch")
    worst, worst_word = 0.0, ()
    for w in a.terms.keys() | b.terms.keys():
        diff = abs(float(a.terms.get(w, 0)) - float(b.terms.get(w, 0)))
        if diff > worst:
            worst, worst_word = diff, w
    return worst, worst_word


# ---- products --------------------------------------------------------------


def concat(x: FreeTensor, y: FreeTensor, max_weight=None) -> FreeTensor:
    """Concatenation (tensor) product, truncated to weight <= max_weight."""
    x._check_compatible(y)
    out = {}
    for u, cu in x.terms.items():
        wu = word_weight(u)
        if max_weight is not None and wu > max_weight:
            continue
        for v, cv in y.terms.items():
            if max_weight is not None and wu + word_weight(v) > max_weight:
                continue
            w = u + v
            s = out.get(w, 0) + cu * cv
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
    t = FreeTensor.zero(x.d, x.exact)
    t.terms = out
    t.truncation_weight = _min_trunc(max_weight,
                                     _min_trunc(x.truncation_weight, y.truncation_weight))
    return t


def concat_many(xs, max_weight=None) -> FreeTensor:
    return reduce(lambda a, b: concat(a, b, max_weight), xs)


def _distinct_arrangements(items):
    """All distinct orderings of a sorted list of hashable items."""
    n = len(items)
    counts = {}
    for it in items:
        counts[it] = counts.get(it, 0) + 1
    keys = sorted(counts)
    arrangement = []

    def rec():
        if len(arrangement) == n:
            yield tuple(arrangement)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                arrangement.append(k)
                yield from rec()
                arrangement.pop()
                counts[k] += 1

    yield from rec()


def symmetric_product(xs, max_weight=None) -> FreeTensor:
    """Symmetric tensor product (x_1, ..., x_n): average of all n! orderings.

    Not computable by nesting the two-argument version; always averages over
    the whole argument list.  Equal arguments are grouped so only distinct
    orderings are multiplied out.
    """
    xs = list(xs)
    if not xs:
        raise ValueError("symmetric_product needs at least one argument")
    d, exact = xs[0].d, xs[0].exact
    for x in xs[1:]:
        xs[0]._check_compatible(x)
    n = len(xs)
    # Group equal tensors; each distinct arrangement of the groups stands for
    # (product of group-size factorials) of the n! orderings.
    groups = []
    for x in xs:
        for g in groups:
            if g[0] == x:
                g[1] += 1
                break
        else:
            groups.append([x, 1])
    mult = 1
    for _, c in groups:
        mult *= math.factorial(c)
    scale = Fraction(mult, math.factorial(n)) if exact else mult / math.factorial(n)
    out = FreeTensor.zero(d, exact)
    for arrangement in _distinct_arrangements(
            sorted(i for i, (_, c) in enumerate(groups) for _ in range(c))):
        out = out + concat_many((groups[i][0] for i in arrangement), max_weight)
    return scale * out


# ---- coproducts ------------------------------------------------------------


class MultiTensor:
    """Element of the n-fold tensor power of the tensor algebra.

    terms maps n-tuples of words to coefficients; used for coproduct values.
    """

    __slots__ = ("d", "n", "exact", "terms")

    def __init__(self, d, n, terms=None, exact=True):
        self.d = d
        self.n = n
        self.exact = exact
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if c != 0:
                    self.terms[tuple(tuple(w) for w in k)] = c

    def _check_compatible(self, other):
        if (self.d, self.n, self.exact) != (other.d, other.n, other.exact):
            raise ValueError("incompatible multi-tensors")

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        t = MultiTensor(self.d, self.n, None, self.exact)
        t.terms = out
        return t

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        return self.__mul__(scalar)

    def __mul__(self, scalar):
        t = MultiTensor(self.d, self.n, None, self.exact)
        if scalar != 0:
            t.terms = {k: c * scalar for k, c in self.terms.items()}
        return t

    def __eq__(self, other):
        if not isinstance(other, MultiTensor):
            return NotImplemented
        return (self.d, self.n, self.exact) == (other.d, other.n, other.exact) \
            and self.terms == other.terms

    def __repr__(self):
        return f"MultiTensor(d={self.d}, n={self.n}, {len(self.terms)} terms)"

    def is_zero(self, tol=0.0):
        if not self.terms:
            return True
        if tol == 0.0:
            return False
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs(self):
        if not self.terms:
            return 0.0
        return max(abs(float(c)) for c in self.terms.values())

    def permute_factors(self, perm):
        """Reorder the tensor factors: entry j of the result is factor perm[j]."""
        t = MultiTensor(self.d, self.n, None, self.exact)
        t.terms = {tuple(k[p] for p in perm): c for k, c in self.terms.items()}
        return t

    def componentwise_concat(self, other):
        """Factorwise concatenation product on n-fold tensors."""
        self._check_compatible(other)
        t = MultiTensor(self.d, self.n, None, self.exact)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(u + v for u, v in zip(k1, k2))
                s = out.get(k, 0) + c1 * c2
                if s == 0:
                    out.pop(k, None)
                else:
                    out[k] = s
        t.terms = out
        return t

    def apply_componentwise(self, fn_per_slot):
        """Substitute each factor word through a word->FreeTensor map and multiply out."""
        d, exact = self.d, self.exact
        out = FreeTensor.zero(d, exact)
        for k, c in self.terms.items():
            factors = [fn_per_slot(w) for w in k]
            out = out + c * concat_many(factors)
        return out


@lru_cache(maxsize=None)
def _splits2(word):
    """All ways to split the positions of a word into an ordered pair of
    complementary subwords, grouped as (left, right, multiplicity)."""
    n = len(word)
    counts = {}
    for mask in range(1 << n):
        left = tuple(word[i] for i in range(n) if (mask >> i) & 1)
        right = tuple(word[i] for i in range(n) if not (mask >> i) & 1)
        key = (left, right)
        counts[key] = counts.get(key, 0) + 1
    return tuple((l, r, c) for (l, r), c in counts.items())


def unshuffle(x: FreeTensor) -> MultiTensor:
    """Unshuffle coproduct.  On a word of length n this is the sum of the 2^n
    ordered subword splits (with multiplicity); on the empty word it is 0.
    """
    out = MultiTensor(x.d, 2, None, x.exact)
    acc = {}
    for w, c in x.terms.items():
        if not w:
            continue  # unshuffle(1) = 0 by convention
        for left, right, mult in _splits2(w):
            key = (left, right)
            s = acc.get(key, 0) + c * mult
            if s == 0:
                acc.pop(key, None)
            else:
                acc[key] = s
    out.terms = acc
    return out


def full_coproduct(x: FreeTensor) -> MultiTensor:
    """Counital unshuffle coproduct: same splits, but unit word maps to 1 (x) 1.

    This is the variant satisfying the bialgebra axiom
    full_coproduct(uv) = full_coproduct(u) . full_coproduct(v).
    """
    out = unshuffle(x)
    c0 = x.degree0()
    if c0 != 0:
        out = out + MultiTensor(x.d, 2, {((), ()): c0}, x.exact)
    return out


@lru_cache(maxsize=None)
def _ordered_splits(word, n):
    """Ordered splits of a word's positions into n nonempty subwords,
    grouped as (words-tuple, multiplicity)."""
    if n == 1:
        return (((word,), 1),) if word else ()
    counts = {}
    length = len(word)
    for mask in range(1, 1 << length):
        if mask == (1 << length) - 1 and n > 1:
            continue
        first = tuple(word[i] for i in range(length) if (mask >> i) & 1)
        rest = tuple(word[i] for i in range(length) if not (mask >> i) & 1)
        for tail, mult in _ordered_splits(rest, n - 1):
            key = (first,) + tail
            counts[key] = counts.get(key, 0) + mult
    return tuple(counts.items())


def reduced_unshuffle(x: FreeTensor, n: int = 2) -> MultiTensor:
    """Iterated reduced coproduct: all factors projected to positive degree.

    For n = 1 this is the positive-degree part of x; it vanishes on words
    shorter than n (conilpotency).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = MultiTensor(x.d, n, None, x.exact)
    acc = {}
    for w, c in x.terms.items():
        for key, mult in _ordered_splits(w, n):
            s = acc.get(key, 0) + c * mult
            if s == 0:
                acc.pop(key, None)
            else:
                acc[key] = s
    out.terms = acc
    return out


# ---- Eulerian idempotent ----------------------------------------------------


def _set_partitions(positions, k):
    """Set partitions of `positions` (a list) into exactly k nonempty blocks."""
    n = len(positions)
    if k < 1 or k > n:
        return
    if k == 1:
        yield [list(positions)]
        return
    first, rest = positions[0], positions[1:]
    # first element alone in a block
    for part in _set_partitions(rest, k - 1):
        yield [[first]] + part
    # first element joins an existing block
    for part in _set_partitions(rest, k):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def _partition_word_multisets(word, k):
    """Multiset of block subwords for every set partition of the positions
    into k blocks, collected as {sorted tuple of words: count}."""
    counts = {}
    for blocks in _set_partitions(list(range(len(word))), k):
        ws = tuple(sorted(tuple(word[i] for i in sorted(b)) for b in blocks))
        counts[ws] = counts.get(ws, 0) + 1
    return counts


@lru_cache(maxsize=None)
def _eulerian_word(word):
    """Eulerian idempotent of a single word as {word: Fraction}.

    Uses the series sum_k ((-1)^(k-1)/k) over ordered splits into k nonempty
    subwords, with splits grouped by their unordered block-word multiset:
    an unordered multiset with repetition counts (c_1, c_2, ...) stands for
    prod(c_i!) orderings of each distinct arrangement of its words.
    """
    n = len(word)
    if n == 0:
        return {}
    if n == 1:
        return {word: Fraction(1)}
    out = {}
    for k in range(1, n + 1):
        base = Fraction((-1) ** (k - 1), k)
        for ws, npart in _partition_word_multisets(word, k).items():
            reps = {}
            for w in ws:
                reps[w] = reps.get(w, 0) + 1
            mult = 1
            for c in reps.values():
                mult *= math.factorial(c)
            coeff = base * npart * mult
            for arrangement in _distinct_arrangements(list(ws)):
                w = sum(arrangement, ())
                s = out.get(w, 0) + coeff
                if s == 0:
                    out.pop(w, None)
                else:
                    out[w] = s
    return out


def _eulerian_word_bruteforce(word):
    """Reference implementation over all ordered splits; for cross-checks."""
    n = len(word)
    out = {}
    for k in range(1, n + 1):
        coeff = Fraction((-1) ** (k - 1), k)
        for parts, mult in _ordered_splits(word, k):
            w = sum(parts, ())
            s = out.get(w, 0) + coeff * mult
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
    return out


def _embed(d, exact, table, factor=1):
    t = FreeTensor.zero(d, exact)
    if exact:
        t.terms = {w: c * factor for w, c in table.items() if c * factor != 0}
    else:
        t.terms = {w: float(c) * factor for w, c in table.items() if float(c) * factor != 0.0}
    return t


def eulerian(x: FreeTensor) -> FreeTensor:
    """Eulerian idempotent applied to x.  The image is primitive, letters are
    fixed, and the empty word is killed."""
    out = FreeTensor.zero(x.d, x.exact)
    for w, c in x.terms.items():
        out = out + _embed(x.d, x.exact, _eulerian_word(w), 1) * c
    return out


def eulerian_word_tensor(d, word, exact=True) -> FreeTensor:
    """e(word) as a tensor over letters {0..d}; convenience constructor."""
    return _embed(d, exact, _eulerian_word(tuple(word)))


@lru_cache(maxsize=None)
def _eulerian_power_word(word, k):
    """e^(*k) of a single word as {word: Fraction}, via e * e^(*(k-1))."""
    if len(word) < k:
        return {}
    if k == 1:
        return _eulerian_word(word)
    out = {}
    for left, right, mult in _splits2(word):
        if not left or not right:
            continue
        eleft = _eulerian_word(left)
        erest = _eulerian_power_word(right, k - 1)
        if not erest:
            continue
        for u, cu in eleft.items():
            for v, cv in erest.items():
                w = u + v
                s = out.get(w, 0) + mult * cu * cv
                if s == 0:
                    out.pop(w, None)
                else:
                    out[w] = s
    return out


def eulerian_power(x: FreeTensor, k: int) -> FreeTensor:
    """k-th convolution power of the Eulerian idempotent applied to x.

    Vanishes on words of length < k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    out = FreeTensor.zero(x.d, x.exact)
    for w, c in x.terms.items():
        table = _eulerian_power_word(w, k)
        if table:
            out = out + _embed(x.d, x.exact, table) * c
    return out


def reconstruct(x: FreeTensor) -> FreeTensor:
    """sum_k e^(*k)(x) / k!  -- must reproduce x exactly."""
    out = FreeTensor.zero(x.d, x.exact)
    c0 = x.degree0()
    if c0 != 0:
        out = out + c0 * FreeTensor.unit(x.d, x.exact)
    for k in range(1, x.max_word_length() + 1):
        factor = Fraction(1, math.factorial(k)) if x.exact else 1.0 / math.factorial(k)
        out = out + eulerian_power(x, k) * factor
    return out


# ---- exponential and logarithm ---------------------------------------------


def _min_term_weight(x):
    return min((word_weight(w) for w in x.terms), default=0)


def tensor_exp(x: FreeTensor, max_weight: int) -> FreeTensor:
    """exp(x) = sum x^k / k! truncated to weight <= max_weight.

    Requires the degree-0 part of x to vanish.
    """
    if x.degree0() != 0:
        raise ValueError("tensor_exp requires vanishing degree-0 part")
    if not x.terms:
        return FreeTensor.unit(x.d, x.exact)
    steps = max_weight // max(_min_term_weight(x), 1)
    one = FreeTensor.unit(x.d, x.exact)
    out = one
    for k in range(steps, 0, -1):
        factor = Fraction(1, k) if x.exact else 1.0 / k
        out = one + concat(x, out, max_weight) * factor
    out.truncation_weight = max_weight
    return out


def tensor_log(y: FreeTensor, max_weight: int) -> FreeTensor:
    """log(y) truncated to weight <= max_weight; requires degree-0 part 1."""
    one = Fraction(1) if y.exact else 1.0
    if y.degree0() != one:
        raise ValueError("tensor_log requires degree-0 part equal to 1")
    z = y - FreeTensor.unit(y.d, y.exact)
    z = project_weight(z, max_weight)
    if not z.terms:
        return FreeTensor.zero(y.d, y.exact)
    steps = max_weight // max(_min_term_weight(z), 1)
    out = FreeTensor.zero(y.d, y.exact)
    power = FreeTensor.unit(y.d, y.exact)
    for k in range(1, steps + 1):
        power = concat(power, z, max_weight)
        factor = Fraction((-1) ** (k - 1), k) if y.exact else ((-1) ** (k - 1)) / k
        out = out + power * factor
    out.truncation_weight = max_weight
    return out


# ---- projections and dilation -----------------------------------------------


def project_weight(x: FreeTensor, m: int) -> FreeTensor:
    """Keep words of inhomogeneous weight <= m (drift letter counts twice)."""
    t = FreeTensor.zero(x.d, x.exact)
    t.terms = {w: c for w, c in x.terms.items() if word_weight(w) <= m}
    t.truncation_weight = _min_trunc(m, x.truncation_weight)
    return t


def project_level(x: FreeTensor, n: int) -> FreeTensor:
    """Keep words of length <= n, regardless of drift letters."""
    t = FreeTensor.zero(x.d, x.exact)
    t.terms = {w: c for w, c in x.terms.items() if len(w) <= n}
    t.truncation_weight = x.truncation_weight
    return t


def restrict_weight(x: FreeTensor, m: int) -> FreeTensor:
    """Keep only words of weight exactly m."""
    t = FreeTensor.zero(x.d, x.exact)
    t.terms = {w: c for w, c in x.terms.items() if word_weight(w) == m}
    t.truncation_weight = _min_trunc(m, x.truncation_weight)
    return t


def dilate(x: FreeTensor, c) -> FreeTensor:
    """Scale each word by c^weight(word).

    With c = sqrt(T) this is the Brownian scaling action: nonzero letters
    pick up sqrt(T) each, the drift letter picks up T.
    """
    t = FreeTensor.zero(x.d, x.exact)
    t.terms = {}
    for w, coeff in x.terms.items():
        v = coeff * c ** word_weight(w)
        if v != 0:
            t.terms[w] = v
    t.truncation_weight = x.truncation_weight
    return t
