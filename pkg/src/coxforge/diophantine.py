"""Nonnegative integer solutions of exact linear degree systems.

The solution set of A v = d, v >= 0 splits as (minimal particular
solutions) + (monoid of homogeneous solutions). Both parts are computed
through one pointed-cone Hilbert basis routine: parametrize the integer
solutions by the kernel lattice, homogenize with an extra coordinate t,
and read the recession basis off the t = 0 slice and the minimal
particular solutions off the t = 1 slice.

The Hilbert basis of a pointed cone B x >= 0 is found the classical way:
extreme rays by active-constraint enumeration, a pulling triangulation
into simplicial subcones, lattice points of each fundamental
parallelepiped via integer diagonalization transforms, then an
irreducibility filter over the collected candidates.
"""

from fractions import Fraction
from itertools import combinations, product

from . import linalg
from .errors import ResourceCapError

# safety valve for degenerate inputs; ADE cones stay tiny
_POINT_LIMIT = 500_000


def in_cone(ineqs, v):
    return all(linalg.dot(row, v) >= 0 for row in ineqs)


def cone_rays(ineqs, dim):
    """Extreme rays of the pointed cone {x in R^dim : B x >= 0}.

    Primitive integer vectors, sorted. Raises ValueError when the cone
    contains a line.
    """
    if dim == 0:
        return []
    if linalg.rank(ineqs) < dim:
        raise ValueError("cone is not pointed")
    rays = set()
    for sub in combinations(range(len(ineqs)), dim - 1):
        m = [ineqs[i] for i in sub]
        if m and linalg.rank(m) != dim - 1:
            continue
        ns = linalg.nullspace(m, width=dim)
        if len(ns) != 1:
            continue
        v = ns[0]
        vals = [linalg.dot(row, v) for row in ineqs]
        if all(x >= 0 for x in vals):
            rays.add(tuple(v))
        elif all(x <= 0 for x in vals):
            rays.add(tuple(-c for c in v))
    rays.discard(tuple(0 for _ in range(dim)))
    return sorted(rays)


def _span_basis(vectors):
    """Row-reduced rational basis of the span of the given vectors."""
    basis = []
    pivots = []
    for vec in vectors:
        v = [Fraction(x) for x in vec]
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p] / b[p]
                v = [a - f * c for a, c in zip(v, b)]
        for j, x in enumerate(v):
            if x != 0:
                basis.append(v)
                pivots.append(j)
                break
    return basis


def _normal_in_span(span_vectors, orth_vectors, dim):
    """A vector inside span(span_vectors) orthogonal to all orth_vectors.

    Returns a primitive integer tuple, or None when the orthogonal
    complement inside the span is not a line.
    """
    basis = _span_basis(span_vectors)
    if not basis:
        return None
    system = [
        [sum(b[i] * Fraction(s[i]) for i in range(dim)) for b in basis]
        for s in orth_vectors
    ]
    mu_space = linalg.nullspace(system, width=len(basis))
    if len(mu_space) != 1:
        return None
    mu = mu_space[0]
    h = [sum(mu[a] * basis[a][i] for a in range(len(basis))) for i in range(dim)]
    return linalg.primitive(h)


def _facets(rays, idx):
    """Facets of cone(rays[i], i in idx), as frozensets of indices."""
    sub = [rays[i] for i in idx]
    dim = len(rays[0])
    d = linalg.rank(sub)
    out = set()
    for comb in combinations(idx, d - 1):
        if comb and linalg.rank([rays[i] for i in comb]) != d - 1:
            continue
        h = _normal_in_span(sub, [rays[i] for i in comb], dim)
        if h is None:
            continue
        vals = {i: linalg.dot(h, rays[i]) for i in idx}
        if any(v > 0 for v in vals.values()) and any(v < 0 for v in vals.values()):
            continue
        face = frozenset(i for i in idx if vals[i] == 0)
        if len(face) == len(idx):
            continue
        if linalg.rank([rays[i] for i in face]) == d - 1:
            out.add(face)
    return out


def triangulate_cone(rays):
    """Pulling triangulation into simplicial subcones; index tuples."""

    def rec(idx):
        sub = [rays[i] for i in idx]
        d = linalg.rank(sub)
        if len(idx) == d:
            return [tuple(idx)]
        v0 = idx[0]
        simplices = set()
        for face in _facets(rays, idx):
            if v0 in face:
                continue
            for s in rec(tuple(sorted(face))):
                simplices.add(tuple(sorted(s + (v0,))))
        return sorted(simplices)

    if not rays:
        return []
    return rec(tuple(range(len(rays))))


def parallelepiped_points(vectors):
    """Lattice points of the half-open parallelepiped of independent
    integer vectors, including the origin."""
    k = len(vectors)
    dim = len(vectors[0])
    r_cols = [[vectors[j][i] for j in range(k)] for i in range(dim)]
    u, s, _v = linalg.diagonalize(r_cols)
    uinv = linalg.int_inverse(u)
    # saturation basis: first k columns of U^{-1}; generator coordinates
    # in that basis: first k rows of U * R
    w_cols = [[uinv[i][j] for j in range(k)] for i in range(dim)]
    ur = linalg.mat_mul(u, r_cols)
    m = [ur[i][:] for i in range(k)]
    for i in range(k, dim):
        if any(x != 0 for x in ur[i]):
            raise ValueError("generators are not independent")
    u2, s2, _v2 = linalg.diagonalize(m)
    diag = [s2[i][i] for i in range(k)]
    count = 1
    for dd in diag:
        count *= dd
    if count == 0:
        raise ValueError("generators are not independent")
    if count > _POINT_LIMIT:
        raise ResourceCapError("parallelepiped holds %d lattice points" % count)
    u2inv = linalg.int_inverse(u2)
    minv = _frac_inverse(m)
    points = set()
    for t in product(*(range(dd) for dd in diag)):
        y = [sum(u2inv[i][j] * t[j] for j in range(k)) for i in range(k)]
        lam = [sum(minv[i][j] * y[j] for j in range(k)) for i in range(k)]
        floors = [x.numerator // x.denominator for x in lam]
        pk = [y[i] - sum(m[i][j] * floors[j] for j in range(k)) for i in range(k)]
        x = [sum(w_cols[i][j] * pk[j] for j in range(k)) for i in range(dim)]
        points.add(tuple(x))
    return sorted(points)


def _frac_inverse(m):
    n = len(m)
    work = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(m)
    ]
    for c in range(n):
        piv = next(i for i in range(c, n) if work[i][c] != 0)
        work[c], work[piv] = work[piv], work[c]
        pv = work[c][c]
        work[c] = [x / pv for x in work[c]]
        for i in range(n):
            if i != c and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return [row[n:] for row in work]


def hilbert_basis_inequalities(ineqs, dim):
    """Hilbert basis of the monoid {x in Z^dim : B x >= 0} (pointed)."""
    rays = cone_rays(ineqs, dim)
    if not rays:
        return []
    candidates = set(rays)
    for simplex in triangulate_cone(rays):
        vecs = [rays[i] for i in simplex]
        for p in parallelepiped_points(vecs):
            if any(x != 0 for x in p):
                candidates.add(p)
    for c in candidates:
        if not in_cone(ineqs, c):
            raise AssertionError("candidate escaped the cone")
    cand = sorted(candidates)
    basis = []
    for h in cand:
        reducible = False
        for c in cand:
            if c == h:
                continue
            diff = tuple(a - b for a, b in zip(h, c))
            if all(x == 0 for x in diff):
                continue
            if in_cone(ineqs, diff):
                reducible = True
                break
        if not reducible:
            basis.append(h)
    return basis


def _vec_key(v):
    return (sum(v), v)


def solve_nonneg(a_rows, d):
    """Solve A v = d over nonnegative integers.

    Returns (particular, recession): the minimal particular solutions and
    the Hilbert basis of {v >= 0 : A v = 0}, both sorted by total degree
    then lexicographically. Every solution is one particular plus a sum of
    recession elements.
    """
    if not a_rows:
        raise ValueError("empty system")
    n_vars = len(a_rows[0])
    kb = linalg.kernel_basis(a_rows, width=n_vars)
    r = len(kb)
    lrows = [[kb[a][i] for a in range(r)] for i in range(n_vars)]

    def back(u):
        return tuple(sum(lrows[i][a] * u[a] for a in range(r)) for i in range(n_vars))

    zero_d = all(x == 0 for x in d)
    if r == 0:
        recession = []
    else:
        recession = [back(u) for u in hilbert_basis_inequalities(lrows, r)]
    if zero_d:
        particular = [tuple(0 for _ in range(n_vars))]
    else:
        v0 = linalg.solve_integer(a_rows, list(d))
        if v0 is None:
            particular = []
        elif r == 0:
            particular = [v0] if all(x >= 0 for x in v0) else []
        else:
            hom = [list(lrows[i]) + [v0[i]] for i in range(n_vars)]
            hom.append([0] * r + [1])
            particular = []
            for u in hilbert_basis_inequalities(hom, r + 1):
                if u[r] == 1:
                    particular.append(
                        tuple(v0[i] + sum(lrows[i][a] * u[a] for a in range(r)) for i in range(n_vars))
                    )
    for p in particular:
        if any(x < 0 for x in p) or linalg.mat_vec(a_rows, list(p)) != list(d):
            raise AssertionError("bad particular solution")
    for m in recession:
        if any(x < 0 for x in m) or any(x != 0 for x in linalg.mat_vec(a_rows, list(m))):
            raise AssertionError("bad recession element")
    return sorted(particular, key=_vec_key), sorted(recession, key=_vec_key)
