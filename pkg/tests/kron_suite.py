"""Shared Kronecker identity checks, used by test_kron and the acceptance gate."""
import numpy as np

from spinopt.kron import comm, kron, swap_operator


def _rand(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _unitary(rng, n):
    Q, R = np.linalg.qr(_rand(rng, n))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _rel(a, b):
    return np.linalg.norm(a - b) / max(1.0, np.linalg.norm(b))


def _ip(A, B):
    return 0.5 * np.trace(A.conj().T @ B)


def check_instance(rng):
    """Worst relative residual per identity on one random instance."""
    n = int(rng.integers(2, 4))
    A, B, C, D, A2, B2 = (_rand(rng, n) for _ in range(6))
    a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    r = {}
    r["bilinear"] = max(_rel(kron(a * A + b * A2, C), a * kron(A, C) + b * kron(A2, C)),
                        _rel(kron(A, a * C + b * D), a * kron(A, C) + b * kron(A, D)))
    r["mixed_product"] = _rel(kron(A, C) @ kron(B, D), kron(A @ B, C @ D))

    # product basis spans End(V (x) W): the n^4 products are linearly independent
    E = [np.eye(n)[:, [i]] @ np.eye(n)[[j], :] for i in range(n) for j in range(n)]
    M = np.array([kron(x, y).ravel() for x in E for y in E])
    r["basis"] = 0.0 if np.linalg.matrix_rank(M) == n ** 4 else 1.0

    # with <X, Y> = tr(X^H Y)/2 per factor the product space carries tr(.)/4
    lhs = 0.25 * np.trace(kron(A, B).conj().T @ kron(A2, B2))
    r["inner_product"] = abs(lhs - _ip(A, A2) * _ip(B, B2)) / max(1.0, abs(lhs))

    r["commutator"] = _rel(comm(kron(A, B), kron(A2, B2)),
                           kron(comm(A, A2), B @ B2) + kron(A2 @ A, comm(B, B2)))
    r["adjoint"] = _rel(kron(A, B).conj().T, kron(A.conj().T, B.conj().T))

    K = kron(A, B)
    ent = max(abs(K[i * n + j, k * n + l] - A[i, k] * B[j, l])
              for i in range(n) for j in range(n) for k in range(n) for l in range(n))
    r["entries"] = ent / max(1.0, np.abs(K).max())
    r["trace"] = abs(np.trace(K) - np.trace(A) * np.trace(B)) / max(1.0, abs(np.trace(K)))

    P = swap_operator(n)
    r["swap"] = max(_rel(K, P @ kron(B, A) @ np.linalg.inv(P)), _rel(P @ P, np.eye(n * n)))
    r["inverse"] = _rel(np.linalg.inv(K), kron(np.linalg.inv(A), np.linalg.inv(B)))

    U, V = _unitary(rng, n), _unitary(rng, n)
    Ap = U.conj().T @ A @ U
    Bp = V.conj().T @ B @ V
    W = kron(U, V)
    r["conjugation"] = _rel(K, W @ kron(Ap, Bp) @ np.linalg.inv(W))

    dK = np.linalg.det(K)
    r["determinant"] = abs(dK - (np.linalg.det(A) * np.linalg.det(B)) ** n) / max(1.0, abs(dK))
    return r


def run_suite(n_instances=500, seed=1):
    rng = np.random.default_rng(seed)
    worst = {}
    for _ in range(n_instances):
        for k, v in check_instance(rng).items():
            worst[k] = max(worst.get(k, 0.0), float(v))
    return worst
