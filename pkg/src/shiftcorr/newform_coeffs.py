"""Normalized Hecke eigenvalues of non-CM newforms.

Three coefficient sources are supported:

* ``ramanujan_tau`` -- the discriminant form Delta (weight 12, level 1);
* ``elliptic_curve`` -- weight 2 forms attached to semistable curves, with
  ``a_p`` obtained by counting points on the reduction mod ``p``;
* ``coeff_file`` -- raw integer q-expansion coefficients read from disk.

All tables store the analytic normalization ``a_n = c_n / n^((k-1)/2)``, so
that ``a_1 = 1`` and ``|a_p| <= 2`` at good primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from numba import njit

from .arith import is_squarefree, primes_up_to, sigma0, sigma0_array, smallest_prime_factor  # noqa: F401
from .errors import DeligneViolation, FileParse, Overflow, UnsupportedSpec

SOURCES = ("ramanujan_tau", "elliptic_curve", "coeff_file")

#: Largest index for which the Delta expansion is carried out.
TAU_N_MAX_CAP = 10**6
#: Largest index for point counting (products of residues must fit in int64).
EC_N_MAX_CAP = 10**7

# Primes just below 2**39; sparse products of residues stay inside int64 for
# expansions up to TAU_N_MAX_CAP.
_TAU_MODULI = (549755813881, 549755813869, 549755813821, 549755813797)


@dataclass(frozen=True)
class NewformSpec:
    """Identifies a newform and where its coefficients come from."""

    weight: int
    level: int
    source: str
    label: str = ""
    curve: tuple[int, ...] | None = None
    path: str | None = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise UnsupportedSpec(f"unknown coefficient source {self.source!r}")
        if self.weight < 2 or self.weight % 2:
            raise UnsupportedSpec(f"weight must be even and >= 2, got {self.weight}")
        if not is_squarefree(self.level):
            raise UnsupportedSpec(f"level must be a positive square-free integer, got {self.level}")
        if self.source == "elliptic_curve":
            if self.weight != 2:
                raise UnsupportedSpec("elliptic curve sources have weight 2")
            if self.curve is None or len(self.curve) != 5:
                raise UnsupportedSpec("elliptic curve sources need (a1, a2, a3, a4, a6)")
            object.__setattr__(self, "curve", tuple(int(a) for a in self.curve))
        if self.source == "ramanujan_tau" and (self.weight, self.level) != (12, 1):
            raise UnsupportedSpec("ramanujan_tau is the level 1, weight 12 form")
        if self.source == "coeff_file" and not self.path:
            raise UnsupportedSpec("coeff_file sources need a path")

    @classmethod
    def delta(cls) -> "NewformSpec":
        return cls(weight=12, level=1, source="ramanujan_tau", label="delta")

    @classmethod
    def elliptic_curve(cls, ainvs, level: int, label: str = "") -> "NewformSpec":
        return cls(weight=2, level=level, source="elliptic_curve", label=label, curve=tuple(ainvs))

    @classmethod
    def from_file(cls, path) -> "NewformSpec":
        """Build a spec from the ``k N label`` header of a coefficient file."""
        k, n, label = _read_coeff_header(Path(path))
        return cls(weight=k, level=n, source="coeff_file", label=label, path=str(path))

    def is_bad(self, p: int) -> bool:
        return self.level % p == 0


@dataclass(frozen=True, eq=False)
class CoeffTable:
    """Normalized coefficients ``a_n`` for ``1 <= n <= max_index``.

    ``values[n]`` holds ``a_n``; ``values[0]`` is unused and set to 0.
    """

    spec: NewformSpec
    max_index: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values.setflags(write=False)

    def __getitem__(self, n):
        return self.values[n]

    def prime_values(self, good_only: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(primes, a_p)`` for primes up to ``max_index``."""
        ps = primes_up_to(self.max_index)
        if good_only and self.spec.level > 1:
            ps = ps[self.spec.level % ps != 0]
        return ps, self.values[ps]


# ---------------------------------------------------------------------------
# table construction


def build_coeff_table(spec: NewformSpec, n_max: int) -> CoeffTable:
    """Normalized Hecke eigenvalues ``a_1 .. a_{n_max}`` for ``spec``.

    Prime values come from the source; composite indices are filled in by
    the Hecke recurrence at prime powers and multiplicativity.  Results are
    memoised per ``(spec, n_max)`` since tables are immutable.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    return _build_cached(spec, int(n_max))


@lru_cache(maxsize=16)
def _build_cached(spec: NewformSpec, n_max: int) -> CoeffTable:
    if spec.source == "coeff_file":
        values = _load_coeff_file_values(spec, n_max)
    else:
        primes = primes_up_to(n_max)
        if spec.source == "ramanujan_tau":
            ap = tau_at_primes(primes) if len(primes) else np.zeros(0)
            ap = np.array([float(t) / float(p) ** 5.5 for t, p in zip(ap, primes)])
        else:
            raw = elliptic_curve_ap(spec.curve, primes, spec.level)
            ap = raw / np.sqrt(primes.astype(float))
        bad = np.array([spec.level % int(p) == 0 for p in primes], dtype=bool)
        values = extend_multiplicatively(primes, ap, bad, n_max)
    _check_deligne(values, spec)
    return CoeffTable(spec=spec, max_index=n_max, values=values)


def extend_multiplicatively(primes, ap, bad, n_max: int) -> np.ndarray:
    """Fill ``a_n`` for all ``n <= n_max`` from prime values.

    Good primes use ``a_{p^{r+1}} = a_p a_{p^r} - a_{p^{r-1}}``; bad primes
    (square-free level) use ``a_{p^r} = a_p^r``.
    """
    spf = smallest_prime_factor(n_max)
    ap_full = np.zeros(n_max + 1)
    bad_full = np.zeros(n_max + 1, dtype=np.bool_)
    ap_full[np.asarray(primes, dtype=np.int64)] = ap
    bad_full[np.asarray(primes, dtype=np.int64)] = bad
    values = np.zeros(n_max + 1)
    _extend(spf, ap_full, bad_full, values)
    return values


@njit(cache=True)
def _extend(spf, ap, bad, a):
    n_max = a.shape[0] - 1
    if n_max >= 1:
        a[1] = 1.0
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n
        pe = 1
        while m % p == 0:
            m //= p
            pe *= p
        if m == 1:
            if pe == p:
                a[n] = ap[p]
            elif bad[p]:
                a[n] = ap[p] * a[n // p]
            else:
                a[n] = ap[p] * a[n // p] - a[n // (p * p)]
        else:
            a[n] = a[pe] * a[m]


def _check_deligne(values: np.ndarray, spec: NewformSpec, slack: float = 1e-9) -> None:
    n_max = values.shape[0] - 1
    if n_max < 1:
        return
    if values[1] != 1.0:
        raise FileParse(f"a_1 must equal 1 for {spec.label or spec.source}, got {values[1]}")
    bound = sigma0_array(n_max).astype(float)
    excess = np.abs(values[1:]) - bound[1:]
    worst = int(np.argmax(excess))
    if excess[worst] > slack:
        raise DeligneViolation(
            f"|a_{worst + 1}| = {abs(values[worst + 1]):.6g} exceeds sigma_0 = {bound[worst + 1]:.0f}"
        )


def theta_angles(table: CoeffTable, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Sato-Tate angles ``theta_p = arccos(a_p / 2)`` at good primes.

    Values within ``tol`` outside ``[-2, 2]`` are clamped; anything further
    out raises :class:`DeligneViolation`.
    """
    ps, ap = table.prime_values(good_only=True)
    half = ap / 2.0
    over = np.abs(half) - 1.0
    if np.any(over > tol / 2.0):
        i = int(np.argmax(over))
        raise DeligneViolation(f"|a_{ps[i]}| = {abs(ap[i]):.12g} > 2")
    return ps, np.arccos(np.clip(half, -1.0, 1.0))


# ---------------------------------------------------------------------------
# Ramanujan tau


def tau_at_primes(primes) -> list[int]:
    """Exact ``tau(p)`` for each prime in ``primes``.

    Expands ``q * prod (1 - q^n)^24`` written as ``q * (prod (1 - q^n)^3)^8``
    where the cube is the sparse Jacobi series
    ``sum_k (-1)^k (2k+1) q^{k(k+1)/2}``.  The eighth power is carried out by
    repeated sparse-times-dense multiplication modulo several ~2^39 primes and
    recombined by CRT, so every value is exact.
    """
    primes = np.asarray(primes, dtype=np.int64)
    if primes.size == 0:
        return []
    n_max = int(primes.max())
    if n_max > TAU_N_MAX_CAP:
        raise Overflow(f"tau expansion to n={n_max} exceeds the configured cap {TAU_N_MAX_CAP}")
    # |tau(p)| <= 2 p^5.5, so the modulus product must exceed 4 p^5.5
    need_bits = 5.5 * math.log2(max(n_max, 2)) + 3
    moduli = []
    bits = 0.0
    for m in _TAU_MODULI:
        moduli.append(m)
        bits += math.log2(m)
        if bits > need_bits:
            break
    if bits <= need_bits:
        raise Overflow("not enough CRT moduli for the requested tau range")

    length = n_max  # coefficients of q^0 .. q^{n_max-1} of eta^24 / q
    shifts, signs = _jacobi_cube_terms(length)
    residues = []
    for m in moduli:
        series = np.zeros(length, dtype=np.int64)
        series[shifts] = signs % m
        for _ in range(7):
            series = _mul_sparse_mod(series, shifts, signs, m)
        residues.append(series[primes - 1])

    big_m = math.prod(moduli)
    out = []
    for i in range(primes.size):
        r = _crt([int(res[i]) for res in residues], moduli)
        if r > big_m // 2:
            r -= big_m
        out.append(r)
    return out


def _jacobi_cube_terms(length: int) -> tuple[np.ndarray, np.ndarray]:
    ks = []
    k = 0
    while k * (k + 1) // 2 < length:
        ks.append(k)
        k += 1
    ks = np.array(ks, dtype=np.int64)
    shifts = ks * (ks + 1) // 2
    signs = np.where(ks % 2 == 0, 1, -1) * (2 * ks + 1)
    return shifts, signs.astype(np.int64)


@njit(cache=True)
def _mul_sparse_mod(a, shifts, coefs, m):
    n = a.shape[0]
    out = np.zeros(n, dtype=np.int64)
    block = 8192
    for start in range(0, n, block):
        stop = min(start + block, n)
        for t in range(shifts.shape[0]):
            s = shifts[t]
            if s >= stop:
                break
            c = coefs[t]
            lo = max(start, s)
            for i in range(lo, stop):
                out[i] += c * a[i - s]
            if t % 64 == 63:
                for i in range(start, stop):
                    out[i] %= m
        for i in range(start, stop):
            out[i] %= m
    return out


def _crt(residues, moduli) -> int:
    x, mod = 0, 1
    for r, m in zip(residues, moduli):
        t = ((r - x) * pow(mod, -1, m)) % m
        x += mod * t
        mod *= m
    return x


def tau_bruteforce(n_max: int) -> list[int]:
    """``tau(1) .. tau(n_max)`` by direct big-integer expansion.

    Multiplies out ``prod_{n < n_max} (1 - q^n)^24`` one binomial factor at a
    time with Python integers.  Slow and simple; used as an oracle.
    """
    length = n_max
    poly = np.zeros(length, dtype=object)
    poly[0] = 1
    binom = [(-1) ** j * math.comb(24, j) for j in range(25)]
    for n in range(1, length):
        new = poly.copy()
        for j in range(1, 25):
            shift = n * j
            if shift >= length:
                break
            new[shift:] += binom[j] * poly[: length - shift]
        poly = new
    return [int(c) for c in poly]


# ---------------------------------------------------------------------------
# elliptic curves


def curve_invariants(ainvs) -> dict:
    a1, a2, a3, a4, a6 = (int(a) for a in ainvs)
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return {"b2": b2, "b4": b4, "b6": b6, "b8": b8, "c4": c4, "c6": c6, "disc": disc}


def count_points_bruteforce(ainvs, p: int) -> int:
    """``#E(F_p)`` by trying every ``(x, y)``, plus the point at infinity."""
    a1, a2, a3, a4, a6 = (int(a) % p for a in ainvs)
    count = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return count


def elliptic_curve_ap(ainvs, primes, level: int) -> np.ndarray:
    """Raw ``a_p = p + 1 - #E(F_p)`` for each prime.

    At ``p | level`` the reduction must be multiplicative, so ``a_p`` is
    ``+1`` (split) or ``-1`` (non-split); anything else means the model or
    the level is wrong and :class:`UnsupportedSpec` is raised.
    """
    inv = curve_invariants(ainvs)
    disc, c4, c6 = inv["disc"], inv["c4"], inv["c6"]
    if disc == 0:
        raise UnsupportedSpec("singular Weierstrass equation")
    primes = np.asarray(primes, dtype=np.int64)
    if primes.size and primes.max() > EC_N_MAX_CAP:
        raise Overflow(f"point counting above {EC_N_MAX_CAP} is not supported")
    out = np.zeros(primes.size)
    for i, p in enumerate(primes.tolist()):
        bad = level % p == 0
        if (disc % p == 0) != bad:
            raise UnsupportedSpec(
                f"curve reduction at p={p} is inconsistent with level {level} (disc={disc})"
            )
        if p <= 3:
            n_pts = count_points_bruteforce(ainvs, p)
        else:
            a = (-27 * c4) % p
            b = (-54 * c6) % p
            if bad or p < 1000:
                n_pts = _count_legendre(a, b, p)
            else:
                n_pts = _count_bsgs(a, b, p)
                if n_pts < 0:
                    n_pts = _count_legendre(a, b, p)
        ap = p + 1 - n_pts
        if bad and ap not in (1, -1):
            raise UnsupportedSpec(f"reduction at p={p} is not multiplicative (a_p={ap})")
        out[i] = ap
    return out


@njit(cache=True)
def _powmod(a, e, p):
    result = 1
    a %= p
    while e > 0:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


@njit(cache=True)
def _invmod(a, p):
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _sqrtmod(a, p):
    # Tonelli-Shanks; a must be a nonzero square mod p
    if p % 4 == 3:
        return _powmod(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, _powmod(z, q, p), _powmod(a, q, p), _powmod(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = b * b % p
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@njit(cache=True)
def _count_legendre(a, b, p):
    is_sq = np.zeros(p, dtype=np.bool_)
    for y in range(1, p):
        is_sq[y * y % p] = True
    total = p + 1
    for x in range(p):
        v = (x * x % p * x + a * x + b) % p
        if v == 0:
            continue
        total += 1 if is_sq[v] else -1
    return total


@njit(cache=True)
def _ec_add(x1, y1, i1, x2, y2, i2, a, p):
    if i1:
        return x2, y2, i2
    if i2:
        return x1, y1, i1
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return 0, 0, True
        lam = (3 * x1 * x1 + a) % p * _invmod(2 * y1, p) % p
    else:
        lam = (y2 - y1) % p * _invmod((x2 - x1) % p, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * ((x1 - x3) % p) - y1) % p
    return x3, y3, False


@njit(cache=True)
def _ec_mul(k, x, y, inf, a, p):
    rx, ry, ri = 0, 0, True
    while k > 0:
        if k & 1:
            rx, ry, ri = _ec_add(rx, ry, ri, x, y, inf, a, p)
        x, y, inf = _ec_add(x, y, inf, x, y, inf, a, p)
        k >>= 1
    return rx, ry, ri


@njit(cache=True)
def _find_multiple(x, y, a, p, lo, hi):
    # some m in [lo, hi] with m*P = O, by baby-step giant-step
    width = hi - lo + 1
    s = int(math.sqrt(width)) + 1
    keys = np.empty(s, dtype=np.int64)
    bx, by, bi = 0, 0, True
    for j in range(s):
        keys[j] = -1 if bi else bx * p + by
        bx, by, bi = _ec_add(bx, by, bi, x, y, False, a, p)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    gx, gy, gi = _ec_mul(s, x, y, False, a, p)
    rx, ry, ri = _ec_mul(lo, x, y, False, a, p)
    for i in range(s + 1):
        target = -1 if ri else rx * p + (p - ry) % p
        k = np.searchsorted(sorted_keys, target)
        if k < s and sorted_keys[k] == target:
            m = lo + i * s + order[k]
            if m <= hi:
                return m
        rx, ry, ri = _ec_add(rx, ry, ri, gx, gy, gi, a, p)
    return -1


@njit(cache=True)
def _point_order(x, y, a, p, m):
    n = m
    q = 2
    rest = m
    while q * q <= rest:
        if rest % q == 0:
            while rest % q == 0:
                rest //= q
            while n % q == 0:
                _, _, inf = _ec_mul(n // q, x, y, False, a, p)
                if not inf:
                    break
                n //= q
        q += 1
    if rest > 1:
        while n % rest == 0:
            _, _, inf = _ec_mul(n // rest, x, y, False, a, p)
            if not inf:
                break
            n //= rest
    return n


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _count_bsgs(a, b, p):
    # Mestre: for p > 229 the curve or its quadratic twist has a point whose
    # order has a unique multiple in the Hasse interval.
    r = int(math.sqrt(4 * p))
    while r * r > 4 * p:
        r -= 1
    while (r + 1) * (r + 1) <= 4 * p:
        r += 1
    lo, hi = p + 1 - r, p + 1 + r
    d = 2
    while _powmod(d, (p - 1) // 2, p) != p - 1:
        d += 1
    ca = np.array([a % p, a * (d * d % p) % p])
    cb = np.array([b % p, b * (d * d % p * d % p) % p])
    lcm = np.array([1, 1])
    np.random.seed(p)
    for _ in range(64):
        for w in range(2):
            while True:
                xx = np.random.randint(0, p)
                v = (xx * xx % p * xx + ca[w] * xx + cb[w]) % p
                if v == 0:
                    yy = 0
                    break
                if _powmod(v, (p - 1) // 2, p) == 1:
                    yy = _sqrtmod(v, p)
                    break
            m = _find_multiple(xx, yy, ca[w], p, lo, hi)
            if m < 0:
                return -1
            o = _point_order(xx, yy, ca[w], p, m)
            lcm[w] = lcm[w] // _gcd(lcm[w], o) * o
            first = ((lo + lcm[w] - 1) // lcm[w]) * lcm[w]
            if first <= hi and first + lcm[w] > hi:
                return first if w == 0 else 2 * p + 2 - first
    return -1


# ---------------------------------------------------------------------------
# coefficient files


def _read_coeff_header(path: Path) -> tuple[int, int, str]:
    if not path.exists():
        raise FileParse(f"coefficient file {path} does not exist")
    with path.open() as fh:
        head = fh.readline().split()
    if len(head) < 2:
        raise FileParse(f"{path}: first line must be 'k N label'")
    try:
        k, n = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FileParse(f"{path}: bad header {head!r}") from exc
    return k, n, " ".join(head[2:])


def _load_coeff_file_values(spec: NewformSpec, n_max: int) -> np.ndarray:
    path = Path(spec.path)
    k, level, _ = _read_coeff_header(path)
    if (k, level) != (spec.weight, spec.level):
        raise FileParse(f"{path}: header k={k} N={level} disagrees with spec")
    values = np.zeros(n_max + 1)
    seen = 0
    last = 0
    with path.open() as fh:
        fh.readline()
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) != 2:
                raise FileParse(f"{path}:{lineno}: expected 'n c_n'")
            try:
                n, c = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise FileParse(f"{path}:{lineno}: non-integer entry") from exc
            if n <= last:
                raise FileParse(f"{path}:{lineno}: indices must be strictly ascending")
            last = n
            if n > n_max:
                break
            values[n] = c / float(n) ** ((k - 1) / 2)
            seen += 1
    if seen < n_max or last < n_max:
        raise FileParse(f"{path}: file covers n <= {last}, need every n <= {n_max}")
    return values


def raw_coefficients(spec: NewformSpec, n_max: int) -> list[int]:
    """Exact integer ``c_1 .. c_{n_max}`` (unnormalized), as Python ints.

    Not available for ``coeff_file`` sources, which already hold them.
    """
    if spec.source == "coeff_file":
        raise UnsupportedSpec("coeff_file sources already store raw coefficients")
    primes = primes_up_to(n_max)
    if spec.source == "ramanujan_tau":
        cp = dict(zip(primes.tolist(), tau_at_primes(primes))) if len(primes) else {}
    else:
        cp = dict(zip(primes.tolist(), (int(round(v)) for v in elliptic_curve_ap(spec.curve, primes, spec.level))))
    k1 = spec.weight - 1
    spf = smallest_prime_factor(n_max)
    c = [0] * (n_max + 1)
    if n_max >= 1:
        c[1] = 1
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, pe = n, 1
        while m % p == 0:
            m //= p
            pe *= p
        if m > 1:
            c[n] = c[pe] * c[m]
        elif pe == p:
            c[n] = int(cp[p])
        elif spec.level % p == 0:
            c[n] = c[p] * c[n // p]
        else:
            c[n] = c[p] * c[n // p] - p**k1 * c[n // (p * p)]
    return c[1:]


def write_coeff_file(path, weight: int, level: int, label: str, raw) -> None:
    """Write raw coefficients ``raw[0] = c_1, raw[1] = c_2, ...``."""
    with open(path, "w") as fh:
        fh.write(f"{weight} {level} {label}\n")
        for n, c in enumerate(raw, start=1):
            fh.write(f"{n} {int(c)}\n")


# ---------------------------------------------------------------------------
# invariant checks


def table_violations(table: CoeffTable) -> dict:
    """Largest deviation from each coefficient invariant over the table.

    Keys: ``deligne`` (max of ``|a_n| - sigma_0(n)``, negative when fine),
    ``multiplicative`` (coprime pairs ``mn <= n_max``), ``hecke`` (good prime
    powers), ``bad_power`` and ``bad_size`` (``p | N``).
    """
    a = table.values
    n_max = table.max_index
    out = {"deligne": float(np.max(np.abs(a[1:]) - sigma0_array(n_max)[1:]))}

    worst = 0.0
    for m in range(2, math.isqrt(n_max) + 1):
        ns = np.arange(m + 1, n_max // m + 1)
        if ns.size == 0:
            continue
        ns = ns[np.gcd(ns, m) == 1]
        if ns.size:
            worst = max(worst, float(np.max(np.abs(a[m * ns] - a[m] * a[ns]))))
    out["multiplicative"] = worst

    hecke = bad_pow = bad_size = 0.0
    for p in primes_up_to(n_max).tolist():
        if table.spec.level % p == 0:
            bad_size = max(bad_size, abs(abs(a[p]) - p**-0.5))
            q = p * p
            r = 2
            while q <= n_max:
                bad_pow = max(bad_pow, abs(a[q] - a[p] ** r))
                q *= p
                r += 1
        else:
            q_prev, q = p, p * p
            q_prev2 = 1
            while q <= n_max:
                hecke = max(hecke, abs(a[q] - (a[p] * a[q_prev] - a[q_prev2])))
                q_prev2, q_prev, q = q_prev, q, q * p
    out.update(hecke=hecke, bad_power=bad_pow, bad_size=bad_size)
    return out
