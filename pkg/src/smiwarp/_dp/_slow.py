"""Pure-Python DP recursion and backtracking, used when the extension is absent."""
import numpy as np

START, DIAG, UP, LEFT = 0, 1, 2, 3


def accumulate(values, maximize):
    values = np.ascontiguousarray(values, dtype=np.float64)
    nx, ny = values.shape
    v = values.tolist()
    sgn = 1.0 if maximize else -1.0
    acc = [[0.0] * ny for _ in range(nx)]
    steps = [[START] * ny for _ in range(nx)]

    row = acc[0]
    row[0] = v[0][0]
    for j in range(1, ny):
        row[j] = row[j - 1] + v[0][j]
        steps[0][j] = LEFT
    for i in range(1, nx):
        prev, row, vi, st = acc[i - 1], acc[i], v[i], steps[i]
        row[0] = prev[0] + vi[0]
        st[0] = UP
        for j in range(1, ny):
            d = sgn * prev[j - 1]
            u = sgn * prev[j]
            l = sgn * row[j - 1]
            if d >= u and d >= l:
                row[j] = prev[j - 1] + vi[j]
                st[j] = DIAG
            elif u >= l:
                row[j] = prev[j] + vi[j]
                st[j] = UP
            else:
                row[j] = row[j - 1] + vi[j]
                st[j] = LEFT
    return np.array(acc, dtype=np.float64), np.array(steps, dtype=np.int8)


def backtrack(steps):
    steps = np.asarray(steps)
    i, j = steps.shape[0] - 1, steps.shape[1] - 1
    px, py = [], []
    st = steps.tolist()
    while True:
        px.append(i + 1)
        py.append(j + 1)
        s = st[i][j]
        if s == START:
            break
        if s == DIAG:
            i -= 1
            j -= 1
        elif s == UP:
            i -= 1
        else:
            j -= 1
    return np.array(px[::-1], dtype=np.int64), np.array(py[::-1], dtype=np.int64)
