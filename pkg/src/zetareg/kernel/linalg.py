"""Exact Gauss-Jordan elimination over any field of exact scalars."""


def solve_exact(columns: list[list], target: list):
    """Solve sum_j x_j columns[j] = target exactly; None if inconsistent."""
    n = len(columns)
    rows = len(target)
    A = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        lead = A[r][c]
        A[r] = [x / lead for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if A[i][n]:
            return None
    x = [0] * n
    for i, c in enumerate(piv_cols):
        x[c] = A[i][n]
    return x
