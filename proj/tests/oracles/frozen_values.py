"""Independent oracles for the frozen expected values in the C++ unit tests.

Conventions: qubit 0 is the most significant bit of a basis-state index.
Single-qubit confusion matrix columns are the prepared state, rows the read
state: [[1-e01, e10], [e01, 1-e10]].
"""
import itertools
import math

import numpy as np

np.set_printoptions(precision=17)


def show(name, v):
    print(name, "=", ", ".join(repr(float(x)) for x in np.ravel(v)))


def qubit_vec(theta):
    return np.array([math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2])


def ideal(thetas):
    out = np.array([1.0])
    for t in thetas:
        out = np.kron(out, qubit_vec(t))
    return out


def confusion(e01, e10):
    return np.array([[1 - e01, e10], [e01, 1 - e10]])


# ideal_distribution at (1.0, 2.3), by explicit per-bit product formula.
p = np.zeros(4)
for b in range(4):
    bits = [(b >> 1) & 1, b & 1]
    prod = 1.0
    for th, bi in zip((1.0, 2.3), bits):
        prod *= math.cos(th / 2) ** (1 - bi) * math.sin(th / 2) ** bi
    p[b] = prod ** 2
show("ideal_1_0_2_3", p)
assert np.allclose(p, ideal((1.0, 2.3)))

# apply_linear with Kronecker of two confusion matrices.
ma = np.array([[0.9, 0.2], [0.1, 0.8]])
mb = np.array([[0.95, 0.1], [0.05, 0.9]])
pin = np.array([0.1, 0.2, 0.3, 0.4])
show("kron_apply", np.kron(ma, mb) @ pin)

# nonlinear: n=2, e01=e10=0.05, kappa=0.2, uniform input -> mbar=0.5, e10=0.15.
pu = np.full(4, 0.25)
mbar = 0.5
lam = np.kron(confusion(0.05, 0.05 + 0.2 * mbar), confusion(0.05, 0.05 + 0.2 * mbar))
show("nonlinear_uniform", lam @ pu)

# drift ramp 0.001*t on e10 at t=10, base e01=0.02, e10=0.05, linear, p=(0.1,0.2,0.3,0.4).
lam = np.kron(confusion(0.02, 0.06), confusion(0.02, 0.06))
show("drift_ramp_t10", lam @ pin)

# 3-qubit counts normalization.
counts = {"000": 4000, "001": 1000, "010": 800, "011": 200,
          "100": 1200, "101": 300, "110": 500, "111": 192}
tot = sum(counts.values())
show("counts3", [counts[format(i, "03b")] / tot for i in range(8)])

# forward of toy model: n=1, one hidden layer of 2 nodes.
w1 = np.array([[1.0, -1.0], [0.5, 2.0]]); b1 = np.array([0.0, -0.5])
w2 = np.array([[1.0, 2.0], [-1.0, 0.5]]); b2 = np.array([0.1, -0.1])
x = np.array([0.3, 0.7])
h = np.maximum(w1 @ x + b1, 0.0)
z = w2 @ h + b2
show("toy_forward", np.exp(z) / np.exp(z).sum())

# cross-entropy of two random 4-vectors.
rng = np.random.default_rng(7)
pred = rng.random(4); pred /= pred.sum()
targ = rng.random(4); targ /= targ.sum()
show("ce_pred", pred); show("ce_targ", targ)
show("ce_value", -sum(t * math.log(q) for t, q in zip(targ, pred)))

# mse on a random 3-qubit pair, kld on a random 2-qubit pair.
a = rng.random(8); a /= a.sum(); b = rng.random(8); b /= b.sum()
show("mse_a", a); show("mse_b", b)
show("mse_value", sum((x - y) ** 2 for x, y in zip(a, b)) / 8)
a = rng.random(4); a /= a.sum(); b = rng.random(4); b /= b.sum()
show("kld_p", a); show("kld_q", b)
show("kld_value", sum(x * math.log(x / y) for x, y in zip(a, b)))


def simplex_grid(d, res):
    m = int(round(1 / res))
    for c in itertools.product(range(m + 1), repeat=d - 1):
        s = sum(c)
        if s <= m:
            yield np.array(list(c) + [m - s]) / m


# project_simplex of (0.6, 0.6, -0.2) by grid search at 1e-3.
v = np.array([0.6, 0.6, -0.2])
m = 1000
best, bx = 1e9, None
for i in range(m + 1):
    j = np.arange(0, m - i + 1)
    pts = np.stack([np.full_like(j, i), j, m - i - j], axis=1) / m
    d = ((pts - v) ** 2).sum(axis=1)
    k = d.argmin()
    if d[k] < best:
        best, bx = d[k], pts[k]
show("project_grid", bx)

# constrained least squares on the 3-simplex: grid at 1e-2, then 1e-3 locally,
# then 1e-4 locally.
lam = np.array([[0.80, 0.07, 0.10, 0.02],
                [0.10, 0.85, 0.03, 0.08],
                [0.06, 0.03, 0.78, 0.10],
                [0.04, 0.05, 0.09, 0.80]])
assert np.allclose(lam.sum(axis=0), 1)
phat = np.array([0.62, 0.30, 0.05, 0.03])
show("li_unconstrained", np.linalg.solve(lam, phat))


def lsq_grid(center, half, step):
    g = np.arange(-half, half + step / 2, step)
    best, bx = 1e9, None
    for a0 in center[0] + g:
        for a1 in center[1] + g:
            a2 = center[2] + g
            a3 = 1 - a0 - a1 - a2
            ok = (a0 >= -1e-15) & (a1 >= -1e-15) & (a2 >= -1e-15) & (a3 >= -1e-15)
            if not ok.any():
                continue
            pts = np.stack([np.full_like(a2, a0), np.full_like(a2, a1), a2, a3], axis=1)[ok]
            r = ((pts @ lam.T - phat) ** 2).sum(axis=1)
            k = r.argmin()
            if r[k] < best:
                best, bx = r[k], pts[k]
    return bx


x = lsq_grid(np.array([0.5, 0.5, 0.5]), 0.5, 0.01)
x = lsq_grid(x, 0.02, 0.001)
x = lsq_grid(x, 0.002, 0.0001)
show("li_grid", x)


def constrained_ls_active_set(L, p):
    """min ||Lx - p|| on the simplex by enumerating supports (exact for small d)."""
    import itertools
    d = L.shape[1]
    best = None
    for k in range(1, d + 1):
        for S in itertools.combinations(range(d), k):
            A = L[:, S]
            # KKT system for min ||A y - p||^2 s.t. sum y = 1
            K = np.zeros((k + 1, k + 1))
            K[:k, :k] = 2 * A.T @ A
            K[:k, k] = 1
            K[k, :k] = 1
            rhs = np.concatenate([2 * A.T @ p, [1.0]])
            try:
                sol = np.linalg.solve(K, rhs)
            except np.linalg.LinAlgError:
                continue
            y = sol[:k]
            if np.any(y < -1e-14):
                continue
            x = np.zeros(d)
            x[list(S)] = y
            f = np.sum((L @ x - p) ** 2)
            if best is None or f < best[0]:
                best = (f, x)
    return best[1]


if __name__ == "__main__":
    L = np.array([[.80, .07, .10, .02], [.10, .85, .03, .08], [.06, .03, .78, .10], [.04, .05, .09, .80]])
    ph = np.array([.62, .30, .05, .03])
    print("li_active_set", repr(list(constrained_ls_active_set(L, ph))))
