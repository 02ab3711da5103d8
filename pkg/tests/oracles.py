"""Slow, independent reference routines used only by the tests.

None of these import from the package under test.
"""

import itertools
from math import gcd


def leibniz_det(rows):
    k = len(rows)
    total = 0
    for perm in itertools.permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(k):
            term *= rows[i][perm[i]]
        total += term
    return total


def matmul(X, Y):
    return [[sum(X[i][t] * Y[t][j] for t in range(len(Y))) for j in range(len(Y[0]))] for i in range(len(X))]


def naive_power(rows, e):
    k = len(rows)
    out = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(e):
        out = matmul(out, rows)
    return out


def naive_order(rows, cap):
    k = len(rows)
    eye = [[int(i == j) for j in range(k)] for i in range(k)]
    P = [list(r) for r in rows]
    for j in range(1, cap + 1):
        if P == eye:
            return j
        P = matmul(P, rows)
    return None


def determinantal_divisors(rows):
    """Invariant factors as ratios of gcds of j x j minors."""
    k = len(rows)
    D = [1]
    for j in range(1, k + 1):
        g = 0
        for ri in itertools.combinations(range(k), j):
            for ci in itertools.combinations(range(k), j):
                g = gcd(g, leibniz_det([[rows[r][c] for c in ci] for r in ri]))
        D.append(g)
    factors = []
    for j in range(1, k + 1):
        if D[j] == 0:
            factors.append(0)
        else:
            factors.append(D[j] // D[j - 1])
    return factors


def reduce_to_diagonal(rows):
    """Row/column reduction to Smith form without tracking transforms.

    Works column by column with gcd steps (Euclid on pairs of entries) rather
    than minimum-pivot selection.
    """
    M = [list(r) for r in rows]
    k = len(M)
    for t in range(k):
        while True:
            # clear column t below the diagonal by Euclid on rows
            for i in range(t + 1, k):
                while M[i][t]:
                    if M[t][t]:
                        q = M[i][t] // M[t][t]
                        M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if M[i][t]:
                        M[t], M[i] = M[i], M[t]
            # clear row t right of the diagonal by Euclid on columns
            for j in range(t + 1, k):
                while M[t][j]:
                    if M[t][t]:
                        q = M[t][j] // M[t][t]
                        for row in M:
                            row[j] -= q * row[t]
                    if M[t][j]:
                        for row in M:
                            row[t], row[j] = row[j], row[t]
            if all(M[i][t] == 0 for i in range(t + 1, k)):
                p = M[t][t]
                bad = [i for i in range(t + 1, k) for j in range(t + 1, k) if p and M[i][j] % p]
                if not bad:
                    break
                M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
    diag = [abs(M[i][i]) for i in range(k)]
    # zeros last, divisibility chain: recompute canonically via gcd/lcm swaps
    for _ in range(k * k):
        for i in range(k - 1):
            a, b = diag[i], diag[i + 1]
            if a == 0 and b != 0:
                diag[i], diag[i + 1] = b, 0
            elif a and b and b % a:
                g = gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
    return diag


def cokernel(diag):
    return sum(1 for d in diag if d == 0), tuple(sorted(d for d in diag if d > 1))


def gl2_unimodular(bound):
    out = []
    for a, b, c, d in itertools.product(range(-bound, bound + 1), repeat=4):
        if abs(a * d - b * c) == 1:
            out.append([[a, b], [c, d]])
    return out
