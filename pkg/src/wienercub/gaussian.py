"""Finite-dimensional Gaussian cubature: constructors, a Wick-moment oracle,
and a CSV loader for externally tabulated rules.

Every rule targets the unit-variance standard normal.  Tables stated for the
weight exp(-r^2) (the classical normalisation) are rescaled at load time:
nodes pick up sqrt(2) and weights are divided by pi^(n/2).

The moment oracle is Isserlis' theorem: the mixed moment E[prod x_i^(a_i)]
of a standard normal is prod (a_i - 1)!! when every a_i is even, else 0.
No rule enters downstream constructions unverified.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

import numpy as np

WEIGHT_SUM_TOL = 1e-14
MOMENT_TOL = 1e-10


def wick_moment(alpha) -> int:
    """E[prod x_i^alpha_i] for a standard normal: prod (alpha_i - 1)!! for
    even exponents, zero if any exponent is odd."""
    out = 1
    for a in alpha:
        if a % 2:
            return 0
        for k in range(a - 1, 0, -2):
            out *= k
    return out


def _multi_indices(n, max_degree):
    for k in range(max_degree + 1):
        for picks in combinations_with_replacement(range(n), k):
            alpha = [0] * n
            for i in picks:
                alpha[i] += 1
            yield tuple(alpha)


@dataclass
class GaussianCubature:
    """Points and positive weights matching standard-normal moments up to
    `degree`.  points has shape (npoints, dim); weights sum to 1."""

    dim: int
    degree: int
    points: np.ndarray
    weights: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(len(self.weights), self.dim)
        self.weights = np.asarray(self.weights, dtype=float)

    def __len__(self):
        return len(self.weights)

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"GaussianCubature(dim={self.dim}, degree={self.degree}, {len(self)} points{label})"

    def validate(self, moment_tol: float = MOMENT_TOL):
        """Raise unless weights are positive, sum to 1, and the declared
        degree verifies against the Wick oracle."""
        if np.any(self.weights <= 0):
            raise ValueError(f"{self!r}: nonpositive weight {self.weights.min()}")
        if abs(self.weights.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"{self!r}: weights sum to {self.weights.sum()!r}")
        disc, alpha = verify_moments(self, self.degree)
        if disc > moment_tol:
            raise ValueError(f"{self!r}: moment discrepancy {disc:.3e} at {alpha}")
        return self


def verify_moments(rule: GaussianCubature, max_degree: int):
    """Worst |cubature moment - Wick moment| over all multi-indices of total
    degree <= max_degree, with the offending index."""
    worst, worst_alpha = 0.0, (0,) * rule.dim
    pts, wts = rule.points, rule.weights
    for alpha in _multi_indices(rule.dim, max_degree):
        vals = np.prod(pts ** np.asarray(alpha), axis=1)
        disc = abs(float(wts @ vals) - wick_moment(alpha))
        if disc > worst:
            worst, worst_alpha = disc, alpha
    return worst, worst_alpha


def sharpness_witness(rule: GaussianCubature):
    """Discrepancy at degree + 1; a genuine degree-`degree` rule must fail here."""
    worst, alpha = 0.0, None
    pts, wts = rule.points, rule.weights
    for alpha_ in _multi_indices(rule.dim, rule.degree + 1):
        if sum(alpha_) != rule.degree + 1:
            continue
        vals = np.prod(pts ** np.asarray(alpha_), axis=1)
        disc = abs(float(wts @ vals) - wick_moment(alpha_))
        if disc > worst:
            worst, alpha = disc, alpha_
    return worst, alpha


# ---- constructors ------------------------------------------------------------


def axis_degree3(n: int) -> GaussianCubature:
    """Degree-3 rule on R^n: the 2n points +-sqrt(n) e_i with equal weights."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = np.zeros((2 * n, n))
    r = math.sqrt(n)
    for i in range(n):
        pts[2 * i, i] = r
        pts[2 * i + 1, i] = -r
    wts = np.full(2 * n, 1.0 / (2 * n))
    return GaussianCubature(n, 3, pts, wts, name=f"axis3-d{n}").validate()


def bernoulli() -> GaussianCubature:
    """The two-point rule +-1 with weights 1/2.  It fills the degree-2 slot in
    the constructions but is in fact exact through degree 3."""
    return GaussianCubature(1, 3, np.array([[1.0], [-1.0]]), np.array([0.5, 0.5]),
                            name="bernoulli").validate()


def gauss_hermite_product(n: int, nodes_per_dim: int) -> GaussianCubature:
    """Product of 1-D Gauss rules for the unit-variance normal.

    k nodes per dimension give exactness degree 2k - 1 and support k^n.
    """
    if nodes_per_dim < 1:
        raise ValueError("nodes_per_dim must be >= 1")
    x, w = np.polynomial.hermite_e.hermegauss(nodes_per_dim)
    w = w / w.sum()
    pts = np.array(list(product(x, repeat=n)))
    wts = np.prod(np.array(list(product(w, repeat=n))), axis=1)
    deg = 2 * nodes_per_dim - 1
    return GaussianCubature(n, deg, pts, wts, name=f"hermite{nodes_per_dim}-d{n}").validate()


def symmetric_degree7_2d() -> GaussianCubature:
    """Degree-7 rule on R^2 with 12 points: the axis orbit at radius sqrt(6)
    plus two diagonal orbits.  Closed form; weights (5 +- 2 sqrt5)/45, 1/36."""
    r = math.sqrt(6.0)
    s = math.sqrt((9.0 - 3.0 * math.sqrt(5.0)) / 4.0)
    t = math.sqrt((9.0 + 3.0 * math.sqrt(5.0)) / 4.0)
    a = 1.0 / 36.0
    b = (5.0 + 2.0 * math.sqrt(5.0)) / 45.0
    c = (5.0 - 2.0 * math.sqrt(5.0)) / 45.0
    pts = [(r, 0), (-r, 0), (0, r), (0, -r)]
    wts = [a] * 4
    for radius, weight in ((s, b), (t, c)):
        for sx, sy in product((1, -1), repeat=2):
            pts.append((sx * radius, sy * radius))
            wts.append(weight)
    return GaussianCubature(2, 7, np.array(pts, dtype=float), np.array(wts),
                            name="sym7-d2-12pt").validate()


def symmetric_degree7(n: int) -> GaussianCubature:
    """Fully symmetric degree-7 rule with 2^n + 2n^2 + 1 points (n = 3 or 4):
    centre, axis orbit, diagonal-pair orbit, and full-corner orbit.

    Solving the seven moment equations for this orbit structure reduces to
    3(n+4) t^2 - 6n t + (3n - 8) = 0 for t = (corner 4th : 2nd moment split);
    both roots give positive weights for n = 3, 4; the smaller root is used.
    Sizes: 27 points for n = 3, 49 for n = 4.
    """
    if n not in (3, 4):
        raise ValueError("the centre/axis/pair/corner degree-7 rule needs n in {3, 4}")
    t = (3 * n - 2 * math.sqrt(24 - 3 * n)) / (3 * (n + 4))
    w2 = 1.0 / t                                    # corner radius^2
    v2 = 2.0 / (1.0 - t)                            # pair radius^2
    p = (4 - n) + (n - 2) * t
    u2 = (16 - 2 * n) / p                           # axis radius^2
    d_w = t ** 3 / 2 ** n                           # corner weight
    c_w = (1.0 - t) ** 3 / 16.0                     # pair weight
    b_w = (8 - n) / u2 ** 3                         # axis weight
    a_w = 1.0 - 2 * n * b_w - 2 * n * (n - 1) * c_w - 2 ** n * d_w
    pts = [[0.0] * n]
    wts = [a_w]
    u = math.sqrt(u2)
    for i in range(n):
        for sg in (1, -1):
            q = [0.0] * n
            q[i] = sg * u
            pts.append(q)
            wts.append(b_w)
    v = math.sqrt(v2)
    for i, j in combinations(range(n), 2):
        for si, sj in product((1, -1), repeat=2):
            q = [0.0] * n
            q[i], q[j] = si * v, sj * v
            pts.append(q)
            wts.append(c_w)
    w = math.sqrt(w2)
    for signs in product((1, -1), repeat=n):
        pts.append([sg * w for sg in signs])
        wts.append(d_w)
    return GaussianCubature(n, 7, np.array(pts), np.array(wts),
                            name=f"sym7-d{n}-{len(wts)}pt").validate()


# Frozen split parameters (theta, c1, d1, c0, d0) for the two-radius family;
# chosen so all three orbit families have strictly positive 2-point radial
# rules.  Verified against the Wick oracle at build time.
_TWO_RADIUS_PARAMS = {
    3: (Fraction(2, 5), Fraction(1, 5), Fraction(1, 4), Fraction(9, 100), Fraction(9, 40)),
    4: (Fraction(1, 2), Fraction(1, 6), Fraction(1, 3), Fraction(3, 40), Fraction(1, 3)),
    5: (Fraction(7, 10), Fraction(1, 16), Fraction(1, 2), Fraction(1, 45), Fraction(2, 5)),
    6: (Fraction(16, 25), Fraction(7, 100), Fraction(11, 20), Fraction(1, 50), Fraction(29, 50)),
    7: (Fraction(7, 10), Fraction(1, 20), Fraction(11, 20), Fraction(1, 100), Fraction(9, 20)),
}


def _two_point_radial(m0, m1, m2, m3):
    """Positive 2-atom rule on s > 0 from four moments, via its orthogonal
    quadratic.  Returns [(mass, s)]; raises if the moments are not strictly
    realizable."""
    den = m1 * m1 - m0 * m2
    if den >= 0:
        raise ValueError("radial moments not positive definite")
    p = (m0 * m3 - m1 * m2) / den
    q = (m2 * m2 - m1 * m3) / den
    disc = p * p - 4 * q
    if disc <= 0:
        raise ValueError("radial moments give complex nodes")
    root = math.sqrt(float(disc))
    s1 = (-float(p) + root) / 2
    s2 = (-float(p) - root) / 2
    if s2 <= 0:
        raise ValueError("radial node not positive")
    ma = (float(m1) - s2 * float(m0)) / (s1 - s2)
    mb = float(m0) - ma
    if ma <= 0 or mb <= 0:
        raise ValueError("radial mass not positive")
    return [(ma, s1), (mb, s2)]


def extended_symmetric_degree7(n: int) -> GaussianCubature:
    """Fully symmetric degree-7 rule with 4n^2 + 2^(n+1) points (3 <= n <= 7):
    axis, diagonal-pair and full-corner orbits, each at two radii.

    The corner family carries the triple moment x1^2 x2^2 x3^2 exactly, the
    pair family the residual of x1^4 x2^2, the axis family the residual of
    x1^6 (which forces n < 8: the axis sixth moment is 16 - 2n).
    """
    if n not in _TWO_RADIUS_PARAMS:
        raise ValueError("two-radius degree-7 rules cover 3 <= n <= 7")
    theta, c1, d1, c0, d0 = _TWO_RADIUS_PARAMS[n]
    d_fam = _two_point_radial(d0, d1, theta, Fraction(1))
    c_fam = _two_point_radial(c0, c1, 1 - theta, Fraction(2))
    b0 = (1 - Fraction(n * (n - 1), 2) * c0 - d0) / n
    b1 = 1 - (n - 1) * c1 - d1
    b2 = 3 - (n - 1) * (1 - theta) - theta
    b3 = Fraction(16 - 2 * n)
    b_fam = _two_point_radial(b0, b1, b2, b3)
    pts, wts = [], []
    for mass, s in b_fam:
        u = math.sqrt(s)
        for i in range(n):
            for sg in (1, -1):
                q = [0.0] * n
                q[i] = sg * u
                pts.append(q)
                wts.append(mass / 2.0)
    for mass, s in c_fam:
        v = math.sqrt(s)
        for i, j in combinations(range(n), 2):
            for si, sj in product((1, -1), repeat=2):
                q = [0.0] * n
                q[i], q[j] = si * v, sj * v
                pts.append(q)
                wts.append(mass / 4.0)
    for mass, s in d_fam:
        w = math.sqrt(s)
        for signs in product((1, -1), repeat=n):
            pts.append([sg * w for sg in signs])
            wts.append(mass / 2 ** n)
    return GaussianCubature(n, 7, np.array(pts), np.array(wts),
                            name=f"sym7x2-d{n}-{len(wts)}pt").validate()


def degree7_catalogue(n: int) -> GaussianCubature:
    """The smallest shipped degree-7 rule in dimension n.

    12 points for n = 2, 27 for n = 3, 49 for n = 4, 4n^2 + 2^(n+1) for
    n = 5..7, and a 4-node Gauss product elsewhere.
    """
    if n == 1:
        return gauss_hermite_product(1, 4)
    if n == 2:
        return symmetric_degree7_2d()
    if n in (3, 4):
        return symmetric_degree7(n)
    if n in _TWO_RADIUS_PARAMS:
        return extended_symmetric_degree7(n)
    return gauss_hermite_product(n, 4)


# ---- CSV interface -----------------------------------------------------------

_SCALINGS = ("standard", "stroud_er2")


def save_table(path, rule: GaussianCubature, scaling: str = "standard"):
    """Write a rule as CSV: a `dim,degree,scaling` header record, then one
    `w,x_1,...,x_n` row per point."""
    if scaling not in _SCALINGS:
        raise ValueError(f"scaling must be one of {_SCALINGS}")
    pts, wts = rule.points, rule.weights
    if scaling == "stroud_er2":
        pts = pts / math.sqrt(2.0)
        wts = wts * math.pi ** (rule.dim / 2.0)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dim", "degree", "scaling"])
        writer.writerow([rule.dim, rule.degree, scaling])
        for w, p in zip(wts, pts):
            writer.writerow([repr(float(w))] + [repr(float(x)) for x in p])


def load_table(path, moment_tol: float = MOMENT_TOL) -> GaussianCubature:
    """Load and verify a CSV rule; `stroud_er2` scaling multiplies nodes by
    sqrt(2) and divides weights by pi^(dim/2).

    Raises ValueError naming the offending line on a malformed row, and
    reports the worst multi-index if moment verification fails.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 3 or [c.strip() for c in rows[0]] != ["dim", "degree", "scaling"]:
        raise ValueError(f"{path}: expected a 'dim,degree,scaling' header record")
    try:
        dim, degree = int(rows[1][0]), int(rows[1][1])
        scaling = rows[1][2].strip()
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: bad header values on line 2: {rows[1]}") from exc
    if scaling not in _SCALINGS:
        raise ValueError(f"{path}: unknown scaling {scaling!r} on line 2")
    pts, wts = [], []
    for lineno, row in enumerate(rows[2:], start=3):
        if not row:
            continue
        if len(row) != dim + 1:
            raise ValueError(f"{path}: line {lineno}: expected {dim + 1} fields, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError as exc:
            raise ValueError(f"{path}: line {lineno}: non-numeric field") from exc
        wts.append(vals[0])
        pts.append(vals[1:])
    pts = np.array(pts)
    wts = np.array(wts)
    if scaling == "stroud_er2":
        pts = pts * math.sqrt(2.0)
        wts = wts / math.pi ** (dim / 2.0)
    rule = GaussianCubature(dim, degree, pts, wts, name=str(path))
    disc, alpha = verify_moments(rule, degree)
    if disc > moment_tol:
        raise ValueError(
            f"{path}: declared degree {degree} fails moment check: "
            f"discrepancy {disc:.3e} at multi-index {alpha}")
    if np.any(wts <= 0):
        raise ValueError(f"{path}: nonpositive weight present")
    if abs(wts.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"{path}: weights sum to {wts.sum()!r}")
    return rule
