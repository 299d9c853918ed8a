"""Small exact linear algebra over the rationals."""

from fractions import Fraction


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def inverse(m):
    """Gauss-Jordan inverse of a square rational matrix."""
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def vecmat(v, m):
    return [sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0))
            for j in range(len(m[0]))]


def bilinear(v, gram, w):
    return sum((v[i] * gram[i][j] * w[j]
                for i in range(len(v)) for j in range(len(w))
                if v[i] and w[j]), Fraction(0))


def gram_schmidt(vectors, gram):
    """Orthogonalize (without normalizing) w.r.t. a rational Gram matrix.

    Returns the new vectors, expressed in the original coordinates, and
    their squared norms; everything stays rational.
    """
    out, norms = [], []
    for v in vectors:
        w = [Fraction(x) for x in v]
        for u, nu in zip(out, norms):
            c = bilinear(w, gram, u) / nu
            w = [a - c * b for a, b in zip(w, u)]
        n = bilinear(w, gram, w)
        if n == 0:
            raise ValueError("degenerate vector in Gram-Schmidt")
        out.append(w)
        norms.append(n)
    return out, norms
