"""Zero ordinates of ``L(s, f)`` and the shifted zero multiset of the product.

Ordinates are stored as positive reals ``gamma`` for zeros ``1/2 + i gamma``;
the conjugate zeros at ``-gamma`` are implied.
"""

from __future__ import annotations

import contextlib
import fcntl
import hashlib
import math
import os
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    CacheCorrupt,
    FileParse,
    InsufficientCoverage,
    NegativeOrdinate,
    NetworkError,
    NonMonotone,
    NotFound,
)
from .newform_coeffs import NewformSpec

URL_ENV = "SHIFTCORR_ZERO_URL"
BUNDLED = {"11.a2": "11.a2.txt", "delta": "delta.txt"}


@dataclass(frozen=True, eq=False)
class ZeroList:
    """Ascending positive ordinates, complete up to ``coverage``."""

    spec: NewformSpec | None
    ordinates: np.ndarray = field(repr=False)
    coverage: float

    def __post_init__(self):
        g = self.ordinates
        if g.size and g[0] <= 0:
            raise NegativeOrdinate(f"ordinate {g[0]} is not positive")
        if g.size > 1 and np.any(np.diff(g) <= 0):
            i = int(np.flatnonzero(np.diff(g) <= 0)[0])
            raise NonMonotone(f"ordinates not strictly ascending at index {i + 1}")
        if g.size and g[-1] > self.coverage:
            raise FileParse(f"ordinate {g[-1]} lies above the declared coverage {self.coverage}")
        g.setflags(write=False)

    def __len__(self):
        return int(self.ordinates.size)


@dataclass(frozen=True, eq=False)
class LambdaZeroSet:
    """Sorted multiset ``{+-gamma +- lam/2} & (-window, window)``."""

    spec: NewformSpec | None
    lam: float
    window: float
    ordinates: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.ordinates.setflags(write=False)

    def __len__(self):
        return int(self.ordinates.size)


@dataclass(frozen=True)
class ZeroCount:
    count: int
    asymptotic: float

    @property
    def ratio(self) -> float:
        return self.count / self.asymptotic if self.asymptotic > 0 else math.nan


def body_checksum(ordinates) -> str:
    """SHA-256 of the canonical ordinate lines (``%.15f`` each)."""
    h = hashlib.sha256()
    for g in ordinates:
        h.update(b"%.15f\n" % g)
    return h.hexdigest()


def _parse_header(line: str):
    parts = line[1:].split()
    if len(parts) != 5:
        raise FileParse(f"header must read '# label k N T_max checksum', got {line.strip()!r}")
    label, k, n, t_max, checksum = parts
    try:
        return label, int(k), int(n), float(t_max), checksum
    except ValueError as exc:
        raise FileParse(f"bad header field: {exc}") from None


def parse_zero_text(text: str, spec=None, t_max: float | None = None) -> ZeroList:
    header = None
    values = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is None and not values:
                header = _parse_header(line)
                continue
            raise FileParse(f"line {lineno}: stray comment")
        try:
            values.append(float(line))
        except ValueError:
            raise FileParse(f"line {lineno}: not a number: {line!r}") from None
    g = np.array(values, dtype=float)
    if not np.all(np.isfinite(g)):
        raise FileParse("non-finite ordinate")
    if g.size and np.any(g <= 0):
        raise NegativeOrdinate(f"ordinate {g[g <= 0][0]} is not positive")
    coverage = t_max
    if header is not None:
        _, k, n, h_tmax, checksum = header
        if spec is not None and (spec.weight, spec.level) != (k, n):
            raise FileParse(f"header says k={k}, N={n}; spec says k={spec.weight}, N={spec.level}")
        if checksum != "-" and body_checksum(g) != checksum:
            raise FileParse("checksum mismatch")
        coverage = h_tmax if coverage is None else min(coverage, h_tmax)
    if coverage is None:
        coverage = float(g[-1]) if g.size else 0.0
    return ZeroList(spec=spec, ordinates=g, coverage=float(coverage))


def load_zeros(path, spec: NewformSpec | None = None, t_max: float | None = None) -> ZeroList:
    """Read a zero file.

    ``t_max`` overrides (can only lower) the coverage in the header; without
    either the list counts as complete up to its last ordinate.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileParse(f"cannot read {path}: {exc}") from None
    return parse_zero_text(text, spec=spec, t_max=t_max)


def format_zero_file(zl: ZeroList, label: str) -> str:
    k, n = (zl.spec.weight, zl.spec.level) if zl.spec is not None else (0, 0)
    lines = [f"# {label} {k} {n} {zl.coverage!r} {body_checksum(zl.ordinates)}"]
    lines += ["%.15f" % g for g in zl.ordinates]
    return "\n".join(lines) + "\n"


def bundled_zeros(label: str, spec: NewformSpec | None = None) -> ZeroList:
    """Zero lists shipped with the package (``11.a2`` and ``delta``)."""
    try:
        name = BUNDLED[label]
    except KeyError:
        raise NotFound(f"no bundled zeros for {label!r}; have {sorted(BUNDLED)}") from None
    text = resources.files("shiftcorr").joinpath("data", name).read_text()
    return parse_zero_text(text, spec=spec)


def _cache_path(cache_dir: Path, label: str, t_max: float) -> Path:
    safe = re.sub(r"[^A-Za-z0-9._-]", "_", label)
    return cache_dir / f"{safe}_T{t_max:g}.txt"


@contextlib.contextmanager
def _locked(cache_dir: Path):
    cache_dir.mkdir(parents=True, exist_ok=True)
    with open(cache_dir / ".lock", "w") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def _download(url: str, timeout: float, retries: int) -> str:
    last = None
    for attempt in range(retries + 1):
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                return resp.read().decode()
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise NotFound(f"{url}: 404") from None
            last = exc
        except (urllib.error.URLError, TimeoutError, OSError) as exc:
            last = exc
        if attempt < retries:
            time.sleep(min(2.0**attempt * 0.1, 2.0))
    raise NetworkError(f"{url}: {last}")


def fetch_zeros(
    label: str,
    t_max: float,
    cache_dir,
    spec: NewformSpec | None = None,
    base_url: str | None = None,
    timeout: float = 30.0,
    retries: int = 2,
) -> ZeroList:
    """Fetch zeros up to ``t_max`` through an on-disk cache.

    ``base_url`` (or ``$SHIFTCORR_ZERO_URL``) is a template with ``{label}``
    and optionally ``{t_max}`` placeholders.  The server must return a zero
    file; ordinates above ``t_max`` are dropped before caching.
    """
    cache_dir = Path(cache_dir)
    path = _cache_path(cache_dir, label, t_max)
    with _locked(cache_dir):
        if path.exists():
            try:
                return load_zeros(path, spec=spec)
            except FileParse as exc:
                raise CacheCorrupt(f"{path}: {exc}") from None
        template = base_url or os.environ.get(URL_ENV)
        if not template:
            raise NetworkError(f"no zero server configured (set {URL_ENV} or pass base_url)")
        url = template.format(label=label, t_max=t_max)
        remote = parse_zero_text(_download(url, timeout, retries), spec=spec)
        if remote.coverage < t_max:
            raise InsufficientCoverage(f"{label}: server covers T <= {remote.coverage}, need {t_max}")
        g = np.array(remote.ordinates[remote.ordinates <= t_max])
        zl = ZeroList(spec=spec, ordinates=g, coverage=float(t_max))
        tmp = path.with_suffix(".part")
        tmp.write_text(format_zero_file(zl, label))
        os.replace(tmp, path)
        return zl


def build_lambda_zeros(zl: ZeroList, lam: float, T: float) -> LambdaZeroSet:
    if not lam > 0:
        raise ValueError(f"shift must be positive, got {lam}")
    half = 0.5 * lam
    if T + half > zl.coverage:
        raise InsufficientCoverage(f"need zeros up to {T + half}, list covers {zl.coverage}")
    g = zl.ordinates
    cand = np.concatenate([g + half, g - half, -g + half, -g - half])
    out = np.sort(cand[np.abs(cand) < T], kind="stable")
    return LambdaZeroSet(spec=zl.spec, lam=float(lam), window=float(T), ordinates=out)


def count_zeros(zeros, T: float) -> ZeroCount:
    """Zeros with ``-T < Im rho < T`` and the leading-order count.

    The reference is ``(2/pi) T log T`` for a zero list and
    ``(4/pi) T log T`` for a shifted set.
    """
    if isinstance(zeros, LambdaZeroSet):
        if T > zeros.window:
            raise InsufficientCoverage(f"T = {T} exceeds window {zeros.window}")
        n = int(np.count_nonzero(np.abs(zeros.ordinates) < T))
        scale = 4.0
    else:
        if T > zeros.coverage:
            raise InsufficientCoverage(f"T = {T} exceeds coverage {zeros.coverage}")
        n = 2 * int(np.searchsorted(zeros.ordinates, T, side="left"))
        scale = 2.0
    ref = scale / math.pi * T * math.log(T) if T > 1 else 0.0
    return ZeroCount(count=n, asymptotic=ref)


def detect_lambda_pairs(zl: ZeroList, lam: float, eps: float) -> list[tuple[float, float, float]]:
    """Pairs of ordinates ``(g, g2)`` of the symmetric zero set with ``|g - g2 - lam| < eps``.

    Each such pair makes ``L(s + i lam/2) L(s - i lam/2)`` vanish to order at
    least two near ``1/2 + i(g - lam/2)``.  Of the mirror images
    ``(g, g2)`` and ``(-g2, -g)`` only the one with ``g + g2 >= 0`` is kept.
    """
    if not (lam > 0 and eps > 0):
        raise ValueError("lam and eps must be positive")
    g = zl.ordinates
    full = np.concatenate([-g[::-1], g])
    lo = np.searchsorted(full, full - lam - eps, side="right")
    hi = np.searchsorted(full, full - lam + eps, side="left")
    out = []
    for i in np.flatnonzero(hi > lo):
        for j in range(lo[i], hi[i]):
            a, b = float(full[i]), float(full[j])
            if a + b > 0 or (a + b == 0 and a > 0):
                out.append((a, b, abs(a - b - lam)))
    return out
