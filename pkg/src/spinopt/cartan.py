"""Symmetric pairs, Killing form, root data and Weyl orbits for su(2) and su(4).

Both control systems are of type AI: after a fixed change of frame ``F`` the
subgroup K becomes SO(N), the complement p becomes i times the real symmetric
traceless matrices and the torus algebra h is diagonal. For the single spin
``F`` is the identity and K = exp(R Ix). For two spins ``F`` is the magic
basis change, under which SU(2)⊗SU(2) is carried onto SO(4).

Torus elements are handled as real coordinate vectors over ``h_basis``.
The map ``theta_map`` turns coordinates into the diagonal phase vector of the
work-frame matrix, i.e. X_work = diag(i * theta_map @ x).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kron as kr
from . import lp
from .config import tol
from .errors import DimMismatch, DimensionCap, MalformedInput, ZeroCoroot
from .matcore import _expm_ah, dagger

# ------------------------------------------------------------------ Killing


def killing_su(X, Y, n=None) -> float:
    """kappa(X, Y) = 2n tr(XY) on su(n)."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape:
        raise DimMismatch(f"{X.shape} vs {Y.shape}")
    n = X.shape[-1] if n is None else n
    return float(np.real(2 * n * np.trace(X @ Y)))


def killing_norm(X) -> float:
    return float(np.sqrt(max(0.0, -killing_su(X, X))))


# ---------------------------------------------------------- symmetric pairs


@dataclass(frozen=True)
class SymmetricPair:
    """Involution given as a sign pattern over an orthogonal basis of su(2^n)."""
    name: str
    n_spins: int
    basis: tuple          # TensorBasisElem entries
    signs: np.ndarray     # +1 on k, -1 on p

    @property
    def group_dim(self):
        return 2 ** self.n_spins

    @property
    def matrices(self):
        return np.array([b.matrix for b in self.basis])

    @property
    def k_index(self):
        return [i for i, s in enumerate(self.signs) if s > 0]

    @property
    def p_index(self):
        return [i for i, s in enumerate(self.signs) if s < 0]

    @property
    def k_basis(self):
        return self.matrices[self.k_index]

    @property
    def p_basis(self):
        return self.matrices[self.p_index]

    def coefficients(self, X):
        B = self.matrices
        return np.real(np.einsum("bij,ij->b", np.conj(B), X)) / self.group_dim

    def theta(self, X):
        c = self.coefficients(X)
        return np.einsum("b,bij->ij", c * self.signs, self.matrices)


def weight_pair(n: int) -> SymmetricPair:
    """Weight-one elements span k, all heavier tensor elements span p."""
    if n < 1 or n > 3:
        raise DimensionCap(f"n_spins={n} outside 1..3")
    basis = tuple(kr.pauli_basis(n))
    signs = np.array([1.0 if b.weight == 1 else -1.0 for b in basis])
    return SymmetricPair(f"weight{n}", n, basis, signs)


def su2_pair() -> SymmetricPair:
    """Single-spin pair: theta keeps Ix and negates Iy, Iz."""
    basis = tuple(kr.pauli_basis(1))
    signs = np.array([1.0 if b.factors == ("Ix",) else -1.0 for b in basis])
    return SymmetricPair("su2", 1, basis, signs)


def cartan_split(X, pair: SymmetricPair):
    """(Xk, Xp) with Xk = (X + theta X)/2 and Xp = (X - theta X)/2."""
    tX = pair.theta(X)
    return 0.5 * (X + tX), 0.5 * (X - tX)


@dataclass
class PairCheck:
    symmetric: bool
    witness: tuple | None = None       # (label_a, label_b) of offending pair
    witness_matrices: tuple | None = None
    p_component_norm: float = 0.0
    failures: dict = field(default_factory=dict)

    def __bool__(self):
        return self.symmetric


def check_symmetric_pair(n_spins: int) -> PairCheck:
    """Brute-force the bracket relations of the weight pair on all basis pairs."""
    pair = weight_pair(n_spins)
    B = pair.matrices
    s = pair.signs
    atol = 1e-10
    fails = {"kk": 0, "kp": 0, "pp": 0}
    first = None
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            C = B[i] @ B[j] - B[j] @ B[i]
            if np.max(np.abs(C)) < atol:
                continue
            ck, cp = cartan_split(C, pair)
            if s[i] > 0 and s[j] > 0:
                bad, key = np.linalg.norm(cp) > atol, "kk"
            elif s[i] < 0 and s[j] < 0:
                bad, key = np.linalg.norm(cp) > atol, "pp"
            else:
                bad, key = np.linalg.norm(ck) > atol, "kp"
            if bad:
                fails[key] += 1
                if key == "pp" and first is None:
                    first = (i, j, float(np.linalg.norm(cp)))
    # orthogonality of k and p under the Killing form
    kk = pair.k_basis
    pp = pair.p_basis
    if len(kk) and len(pp):
        gram = np.real(np.einsum("aij,bji->ab", kk, pp))
        fails["orth"] = int(np.sum(np.abs(gram) > 1e-9))
    ok = not any(fails.values())
    if ok:
        return PairCheck(True, failures=fails)
    if first is None:
        return PairCheck(False, failures=fails)
    i, j, nrm = first
    return PairCheck(False, (pair.basis[i].label, pair.basis[j].label),
                     (B[i], B[j]), nrm, fails)


# ---------------------------------------------------------------- root data

_S2 = 1.0 / np.sqrt(2.0)
MAGIC = _S2 * np.array([[1, 0, 0, 1],
                        [0, 1, -1, 0],
                        [1j, 0, 0, -1j],
                        [0, 1j, 1j, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class RootData:
    name: str
    N: int
    frame: np.ndarray         # F; work frame matrix = F M F^H
    theta_map: np.ndarray     # (N, r)
    coroots: np.ndarray       # (m, r) coordinates, +- pairs
    roots: np.ndarray         # (m, r) functional coefficients; roots[j] pairs with coroots[j]
    root_pairs: tuple         # (i, j) index pairs behind each root theta_i - theta_j

    @property
    def rank(self):
        return self.theta_map.shape[1]

    def to_work(self, M):
        return self.frame @ M @ dagger(self.frame)

    def from_work(self, M):
        return dagger(self.frame) @ M @ self.frame

    def h_work(self, x):
        return np.diag(1j * (self.theta_map @ np.asarray(x, dtype=float)))

    def h_matrix(self, x):
        """Computational-frame matrix of the torus element with coordinates x."""
        return self.from_work(self.h_work(x))

    @property
    def h_basis(self):
        return np.array([self.h_matrix(e) for e in np.eye(self.rank)])

    @property
    def gram(self):
        """Trace Gram matrix Re tr(H_i^H H_j) of the h basis (not diagonal for su4)."""
        return self.theta_map.T @ self.theta_map

    def theta(self, x):
        return self.theta_map @ np.asarray(x, dtype=float)

    def coords_from_theta(self, th):
        return np.linalg.lstsq(self.theta_map, np.asarray(th, dtype=float), rcond=None)[0]

    def to_json(self):
        return {"name": self.name,
                "coroots": [[float(v) for v in c] for c in self.coroots],
                "roots": [[float(v) for v in c] for c in self.roots]}


def _root_data(name, N, frame, theta_map, coroot_pairs):
    theta_map = np.asarray(theta_map, dtype=float)
    pinv = np.linalg.pinv(theta_map)
    cor, rts, prs = [], [], []
    for sign in (1, -1):
        for (i, j) in coroot_pairs:
            e = np.zeros(N)
            e[i], e[j] = 1.0, -1.0
            cor.append(sign * (pinv @ e))
            rts.append(sign * (theta_map[i] - theta_map[j]))
            prs.append((i, j) if sign > 0 else (j, i))
    cor = np.array(cor)
    cor[np.abs(cor) < 1e-14] = 0.0
    return RootData(name, N, frame, theta_map, cor, np.array(rts), tuple(prs))


def su2_roots() -> RootData:
    return _root_data("su2", 2, np.eye(2, dtype=np.complex128), [[1.0], [-1.0]], [(0, 1)])


def su4_roots() -> RootData:
    M = [[1, 1, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]]
    # order Y1..Y6 = H1, H2, H3, H2-H1, H3-H1, H3-H2
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    return _root_data("su4", 4, MAGIC.copy(), M, pairs)


def roots_for(name: str) -> RootData:
    if name == "su2":
        return su2_roots()
    if name == "su4":
        return su4_roots()
    raise DimensionCap(f"unknown system {name!r}")


def pair_for(name: str) -> SymmetricPair:
    return su2_pair() if name == "su2" else weight_pair(2)


# ------------------------------------------------------------- Weyl action


def weyl_reflect(x, y, gram=None):
    """Reflect x through the hyperplane orthogonal to y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    G = np.eye(len(y)) if gram is None else gram
    yy = float(y @ G @ y)
    if yy <= 1e-300:
        raise ZeroCoroot("cannot reflect through zero")
    return x - 2.0 * float(x @ G @ y) / yy * y


def _sort_points(pts):
    return sorted(pts, key=lambda p: tuple(np.round(p, 9)))


def weyl_orbit(hd, roots: RootData) -> np.ndarray:
    """Closure of hd under all coroot reflections, lexicographically sorted."""
    G = roots.gram
    eps = tol().orbit_dedup
    pts = [np.asarray(hd, dtype=float)]
    frontier = list(pts)
    while frontier:
        nxt = []
        for p in frontier:
            for y in roots.coroots:
                q = weyl_reflect(p, y, G)
                if all(np.max(np.abs(q - r)) > eps for r in pts):
                    pts.append(q)
                    nxt.append(q)
        frontier = nxt
    return np.array(_sort_points(pts))


def is_generic(hd, roots: RootData) -> bool:
    vals = roots.roots @ np.asarray(hd, dtype=float)
    return bool(np.all(np.abs(vals) > tol().generic))


def weyl_element(src, dst, roots: RootData) -> np.ndarray:
    """Signed permutation n in SO(N) (work frame) with n h(src) n^T = h(dst)."""
    a = roots.theta(src)
    b = roots.theta(dst)
    N = roots.N
    used = set()
    P = np.zeros((N, N))
    for i in range(N):
        for j in range(N):
            if j not in used and abs(b[i] - a[j]) < 1e-8:
                P[i, j] = 1.0
                used.add(j)
                break
        else:
            raise MalformedInput("points are not Weyl related")
    if np.linalg.det(P) < 0:
        P[0] *= -1.0
    return P


# -------------------------------------------------------- controllability


def _real_vec(M):
    M = np.asarray(M)
    return np.concatenate([M.real.ravel(), M.imag.ravel()])


def lie_closure_dim(mats) -> int:
    """Dimension of the real Lie algebra generated by the given matrices."""
    cut = tol().lie_rank
    basis = []

    def add(M):
        v = _real_vec(M)
        if not basis:
            if np.linalg.norm(v) > cut:
                basis.append(M)
                return True
            return False
        A = np.array([_real_vec(b) for b in basis] + [v])
        s = np.linalg.svd(A, compute_uv=False)
        if s[-1] > cut * max(1.0, s[0]):
            basis.append(M)
            return True
        return False

    for M in mats:
        add(np.asarray(M, dtype=np.complex128))
    grew = True
    while grew:
        grew = False
        cur = list(basis)
        for A, B in itertools.combinations(cur, 2):
            if add(A @ B - B @ A):
                grew = True
    return len(basis)


def controllability_check(hd, hjs) -> bool:
    mats = [np.asarray(hd)] + [np.asarray(h) for h in hjs]
    n = mats[0].shape[0]
    return lie_closure_dim(mats) == n * n - 1


# ------------------------------------------------------ Kostant convexity


def gamma_project(X, roots: RootData) -> np.ndarray:
    """Killing-orthogonal projection of X (computational frame) onto h, as coordinates."""
    Hb = roots.h_basis
    b = np.real(np.einsum("kij,ij->k", np.conj(Hb), np.asarray(X)))
    return np.linalg.solve(roots.gram, b)


def random_k_element(pair: SymmetricPair, rng, radius=np.pi):
    """Random element of k with spectral norm uniform in [0, radius]."""
    kb = pair.k_basis
    c = rng.standard_normal(len(kb))
    Z = np.einsum("b,bij->ij", c, kb)
    nrm = np.max(np.abs(np.linalg.eigvals(Z)))
    return Z * (rng.uniform(0.0, radius) / max(nrm, 1e-300))


def random_k(pair: SymmetricPair, rng, draws=3, size=None):
    """Product of ``draws`` exponentials of random k elements (batched if size given)."""
    n = 1 if size is None else size
    Zs = np.array([[random_k_element(pair, rng) for _ in range(draws)] for _ in range(n)])
    E = _expm_ah(Zs.reshape(-1, *Zs.shape[-2:])).reshape(Zs.shape)
    out = E[:, 0]
    for d in range(1, draws):
        out = out @ E[:, d]
    return out[0] if size is None else out


@dataclass
class KostantReport:
    n_samples: int
    max_violation: float
    n_outside: int
    orbit_size: int

    def to_json(self):
        return {"n_samples": self.n_samples, "max_violation": self.max_violation,
                "n_outside": self.n_outside, "orbit_size": self.orbit_size}


def kostant_sample(x, pair: SymmetricPair, roots: RootData, n_samples: int, seed: int,
                   streams: int = 4, threshold: float = 1e-8) -> KostantReport:
    """Project Ad_k X onto h for random k and measure how far it leaves conv(W.X).

    The violation of a projected point p is the radial excess
    |p| (1 - 1/g(p)) where g is the gauge of the hull, computed by the
    same basic-subset LP as the minimal-time routine.
    """
    x = np.asarray(x, dtype=float)
    orbit = weyl_orbit(x, roots)
    X = roots.h_matrix(x)
    G = roots.gram
    seqs = np.random.SeedSequence(seed).spawn(streams)
    counts = [n_samples // streams + (1 if i < n_samples % streams else 0) for i in range(streams)]
    worst, n_out = 0.0, 0
    solver = lp.GaugeSolver(orbit) if np.any(np.abs(x) > 0) else None
    for ss, cnt in zip(seqs, counts):
        if cnt == 0:
            continue
        rng = np.random.default_rng(ss)
        ks = random_k(pair, rng, size=cnt)
        Y = ks @ X @ dagger(ks)
        Hb = roots.h_basis
        b = np.real(np.einsum("kij,nij->nk", np.conj(Hb), Y))
        P = np.linalg.solve(G, b.T).T
        norms = np.sqrt(np.einsum("ni,ij,nj->n", P, G, P))
        if solver is None:
            viol = norms
        else:
            g = solver.gauge(P)
            viol = np.where(g > 1.0, norms * (1.0 - 1.0 / np.maximum(g, 1e-300)), 0.0)
        worst = max(worst, float(viol.max()))
        n_out += int(np.sum(viol > threshold))
    return KostantReport(n_samples, worst, n_out, len(orbit))


class WeylOrbitData:
    """Weyl orbit of a drift torus element with the Weyl elements realizing it."""

    def __init__(self, hd, roots: RootData):
        self.roots = roots
        self.hd = np.asarray(hd, dtype=float)
        self.points = weyl_orbit(self.hd, roots)
        self._solver = None

    def __len__(self):
        return len(self.points)

    @property
    def solver(self) -> lp.GaugeSolver:
        if self._solver is None:
            self._solver = lp.GaugeSolver(self.points)
        return self._solver

    def matrix(self, j):
        """Computational-frame matrix of orbit point j."""
        return self.roots.h_matrix(self.points[j])

    def weyl_element(self, j):
        """n_j in K (computational frame) with n_j H_d n_j^-1 = Y_j."""
        n = weyl_element(self.hd, self.points[j], self.roots)
        return self.roots.from_work(n.astype(np.complex128))

    def to_json(self):
        return {"system": self.roots.name, "hd": [float(v) for v in self.hd],
                "points": [[float(v) for v in p] for p in self.points],
                "coroots": self.roots.to_json()["coroots"]}
