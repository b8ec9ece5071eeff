"""Integer lattices: Hermite/Smith forms, saturation, complements,
elementary automorphisms.

Everything is exact over Python integers.  Row-vector convention throughout:
lattices are row spans, automorphisms act on the right, and the matrix of a
word of automorphisms is the product of the factor matrices in order.
"""

from dataclasses import dataclass
from fractions import Fraction

from .graphs import InputError


def mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_det(m):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank_of(rows):
    work = [[Fraction(x) for x in r] for r in rows]
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c] / work[r][c]
                for j in range(ncols):
                    work[i][j] -= f * work[r][j]
        r += 1
    return r


def hermite_normal_form(rows):
    """Row-style HNF: echelon, positive pivots, entries above reduced.

    Returns the nonzero rows; the zero lattice yields an empty tuple.
    """
    work = [list(r) for r in rows]
    if not work:
        return ()
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        # gcd out the column below the pivot
        for i in range(r + 1, len(work)):
            while work[i][c] != 0:
                q = work[r][c] // work[i][c]
                for j in range(ncols):
                    work[r][j] -= q * work[i][j]
                work[r], work[i] = work[i], work[r]
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
        for i in range(r):
            q = work[i][c] // work[r][c]
            if q:
                for j in range(ncols):
                    work[i][j] -= q * work[r][j]
        r += 1
    return tuple(tuple(row) for row in work[:r] if any(row))


def smith_normal_form(m):
    """Exact Smith form: returns (U, D, V) with U D V = M, U and V unimodular,
    and D diagonal with each invariant dividing the next."""
    rows, cols = len(m), len(m[0]) if m else 0
    a = [list(r) for r in m]
    # left = row ops applied, right = col ops applied; track inverses so that
    # U = left^-1 and V = right^-1 come out directly: accumulate U and V as
    # the matrices with U D V = M by applying the inverse of each op.
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for k in range(rows):  # U <- U * swap
            u[k][i], u[k][j] = u[k][j], u[k][i]

    def row_add(i, j, q):  # row_i += q row_j in A; U absorbs the inverse
        for k in range(cols):
            a[i][k] += q * a[j][k]
        for k in range(rows):
            u[k][j] -= q * u[k][i]

    def row_neg(i):
        for k in range(cols):
            a[i][k] = -a[i][k]
        for k in range(rows):
            u[k][i] = -u[k][i]

    def col_swap(i, j):
        for r_ in range(rows):
            a[r_][i], a[r_][j] = a[r_][j], a[r_][i]
        v[i], v[j] = v[j], v[i]

    def col_add(i, j, q):  # col_i += q col_j
        for r_ in range(rows):
            a[r_][i] += q * a[r_][j]
        for k in range(cols):
            v[j][k] -= q * v[i][k]

    def col_neg(i):
        for r_ in range(rows):
            a[r_][i] = -a[r_][i]
        for k in range(cols):
            v[i][k] = -v[i][k]

    def clear_pivot_block(t):
        """Clear row/column t, then force the pivot to divide the rest.

        Divisible entries are cleared without touching the pivot; otherwise
        a Euclid step strictly shrinks |pivot|, which bounds the iteration.
        """
        while True:
            for i in range(t + 1, rows):
                while a[i][t] != 0:
                    if a[i][t] % a[t][t] == 0:
                        row_add(i, t, -(a[i][t] // a[t][t]))
                    else:
                        q = a[t][t] // a[i][t]
                        row_add(t, i, -q)
                        row_swap(t, i)
            for j in range(t + 1, cols):
                while a[t][j] != 0:
                    if a[t][j] % a[t][t] == 0:
                        col_add(j, t, -(a[t][j] // a[t][t]))
                    else:
                        q = a[t][t] // a[t][j]
                        col_add(t, j, -q)
                        col_swap(t, j)
            if any(a[i][t] for i in range(t + 1, rows)):
                continue  # a Euclid column swap re-dirtied the column
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                return
            row_add(t, bad, 1)

    t = 0
    while t < min(rows, cols):
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        clear_pivot_block(t)
        if a[t][t] < 0:
            row_neg(t)
        t += 1
    d = tuple(tuple(a[i][j] for j in range(cols)) for i in range(rows))
    return (
        tuple(tuple(r) for r in u),
        d,
        tuple(tuple(r) for r in v),
    )


def smith_invariants(m):
    """Nonzero diagonal invariants d1 | d2 | ... of the Smith form."""
    _, d, _ = smith_normal_form(m)
    out = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]
    return tuple(out)


@dataclass(frozen=True)
class IntLattice:
    """Sublattice of Z^n given by independent basis rows (possibly none)."""

    dim: int
    basis: tuple  # tuple of integer row tuples

    def __post_init__(self):
        for r in self.basis:
            if len(r) != self.dim:
                raise InputError("basis row of wrong length")
        if self.basis and rank_of(self.basis) != len(self.basis):
            raise InputError("basis rows are dependent")

    @classmethod
    def from_rows(cls, dim, rows):
        """Lattice spanned by arbitrary rows (dependencies removed via HNF)."""
        return cls(dim, hermite_normal_form([tuple(r) for r in rows]))

    @property
    def rank(self):
        return len(self.basis)

    def hnf(self):
        return IntLattice(self.dim, hermite_normal_form(self.basis))

    def contains(self, vec):
        """Integer membership via HNF back-substitution."""
        h = hermite_normal_form(self.basis)
        v = list(vec)
        pivots = []
        for row in h:
            c = next((j for j, x in enumerate(row) if x), None)
            pivots.append((row, c))
        for row, c in pivots:
            if v[c] % row[c] != 0:
                return False
            q = v[c] // row[c]
            for j in range(self.dim):
                v[j] -= q * row[j]
        return not any(v)

    def __eq__(self, other):
        return (
            isinstance(other, IntLattice)
            and self.dim == other.dim
            and hermite_normal_form(self.basis) == hermite_normal_form(other.basis)
        )

    def __hash__(self):
        return hash((self.dim, hermite_normal_form(self.basis)))


def full_lattice(n):
    return IntLattice(n, mat_identity(n))


def saturation(lat):
    """Minimal direct summand of Z^n containing the lattice.

    With basis B = U D V, the rational row span meets Z^n in the span of the
    first rank(B) rows of V.
    """
    if not lat.basis:
        return IntLattice(lat.dim, ())
    u, d, v = smith_normal_form(lat.basis)
    r = len(lat.basis)
    return IntLattice(lat.dim, hermite_normal_form([v[i] for i in range(r)]))


def lattice_index(sub, amb):
    """Index of ``sub`` inside ``amb`` for equal full rank, as |det| ratio."""
    if sub.rank != amb.rank:
        raise InputError("index needs equal ranks")
    coords = coordinates_in(sub, amb)
    det = mat_det(coords)
    if det == 0:
        raise InputError("degenerate inclusion")
    return abs(det)


def coordinates_in(sub, amb):
    """Integer coordinates of sub's basis in amb's basis; errors if not inside."""
    out = []
    for row in sub.basis:
        coeffs = _solve_integer(amb.basis, row)
        if coeffs is None:
            raise InputError("lattice is not contained in the ambient one")
        out.append(tuple(coeffs))
    return tuple(out)


def _solve_integer(basis, vec):
    """Solve x * basis = vec over the integers, or None."""
    rows = len(basis)
    if rows == 0:
        return () if not any(vec) else None
    cols = len(vec)
    work = [[Fraction(basis[i][j]) for j in range(cols)] for i in range(rows)]
    aug = [
        [Fraction(1 if i == j else 0) for j in range(rows)] for i in range(rows)
    ]
    t = [Fraction(x) for x in vec]
    sol = [Fraction(0)] * rows
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                f = work[i][c] / work[r][c]
                for j in range(cols):
                    work[i][j] -= f * work[r][j]
                for j in range(rows):
                    aug[i][j] -= f * aug[r][j]
        r += 1
    for i in range(rows):
        c = next((j for j in range(cols) if work[i][j] != 0), None)
        if c is None:
            continue
        f = t[c] / work[i][c]
        for j in range(cols):
            t[j] -= f * work[i][j]
        for j in range(rows):
            sol[j] += f * aug[i][j]
    if any(x != 0 for x in t):
        return None
    if any(x.denominator != 1 for x in sol):
        return None
    return [int(x) for x in sol]


def complement_summand(lat):
    """A complement C with lat + C = Z^n as a direct sum.

    Requires a saturated lattice.  The choice is the deterministic one coming
    from the Smith transform (HNF-reduced for stability across runs).
    """
    sat = saturation(lat)
    if sat != lat.hnf() and lat.basis:
        raise InputError("complement_summand needs a saturated lattice")
    if not lat.basis:
        return full_lattice(lat.dim)
    u, d, v = smith_normal_form(lat.basis)
    r = lat.rank
    rest = [v[i] for i in range(r, lat.dim)]
    return IntLattice(lat.dim, hermite_normal_form(rest))


@dataclass(frozen=True)
class SublatticePair:
    """Finite-index inclusion of full-rank lattices sub <= amb in Z^n."""

    amb: IntLattice
    sub: IntLattice

    def __post_init__(self):
        if self.amb.dim != self.sub.dim:
            raise InputError("ambient/sub dimension mismatch")
        if self.amb.rank != self.sub.rank:
            raise InputError("pair must have equal ranks (finite index)")
        coordinates_in(self.sub, self.amb)  # raises when not contained

    @property
    def rank(self):
        return self.amb.rank

    def relative_matrix(self):
        """Coordinates of sub's basis in amb's basis (square, nonzero det)."""
        return coordinates_in(self.sub, self.amb)

    def index(self):
        return lattice_index(self.sub, self.amb)

    def invariants(self):
        """Elementary divisors of the inclusion."""
        return smith_invariants(self.relative_matrix())


@dataclass(frozen=True)
class ElementaryGen:
    """Transvection datum: corank-1 summand C, multiplier c in C, completion x.

    The resulting automorphism fixes C pointwise and maps x to x + c; the
    other completions of C differ by elements of C (same map) or by a sign
    (the inverse map), so x only pins the orientation.
    """

    dim: int
    multiplier: tuple
    complement: IntLattice
    completion: tuple

    def __post_init__(self):
        if self.complement.rank != self.dim - 1:
            raise InputError("complement must have corank 1")
        if not self.complement.contains(self.multiplier):
            raise InputError("multiplier must lie in the complement")
        stacked = (tuple(self.completion),) + self.complement.basis
        if abs(mat_det(stacked)) != 1:
            raise InputError("completion does not complete the summand to Z^n")


def elementary_gen(dim, multiplier, complement, completion=None):
    if completion is None:
        comp = complement_summand(complement.hnf())
        completion = comp.basis[0]
    return ElementaryGen(dim, tuple(multiplier), complement, tuple(completion))


def elementary_matrix(gen):
    """Matrix (row action) fixing the summand pointwise and adding the
    multiplier to the completion."""
    n = gen.dim
    p = [list(gen.completion)] + [list(r) for r in gen.complement.basis]
    # image rows in the (x, C) basis: x -> x + c, C fixed
    c_coords = _solve_integer(gen.complement.basis, gen.multiplier)
    img = [[1] + list(c_coords)]
    for i in range(n - 1):
        img.append([0] + [1 if j == i else 0 for j in range(n - 1)])
    # matrix in the standard basis: P^-1 N P with P the stacked basis
    p_inv = _unimodular_inverse(p)
    return mat_mul(mat_mul(p_inv, tuple(tuple(r) for r in img)), tuple(tuple(r) for r in p))


def _unimodular_inverse(m):
    n = len(m)
    work = [[Fraction(x) for x in r] for r in m]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if work[i][c] != 0)
        work[c], work[piv] = work[piv], work[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        f = work[c][c]
        for j in range(n):
            work[c][j] /= f
            inv[c][j] /= f
        for i in range(n):
            if i != c and work[i][c] != 0:
                f = work[i][c]
                for j in range(n):
                    work[i][j] -= f * work[c][j]
                    inv[i][j] -= f * inv[c][j]
    out = tuple(tuple(int(x) for x in r) for r in inv)
    return out
