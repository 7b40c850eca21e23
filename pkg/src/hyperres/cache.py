"""Optional on-disk memo for the arbitrary-precision Legendre fallback.

Activated by the HYPERRES_CACHE environment variable (a directory).  The
fallback path costs milliseconds per point, so repeated runs over the
same scan grids benefit from persistence; the fast vectorized paths are
never cached.
"""

from __future__ import annotations

import os
import pickle

_MEM: dict = {}
_DIRTY = 0
_LOADED_FROM: str | None = None


def _cache_file():
    d = os.environ.get("HYPERRES_CACHE")
    if not d:
        return None
    os.makedirs(d, exist_ok=True)
    return os.path.join(d, "legendre_mp_cache.pkl")


def _load():
    global _LOADED_FROM
    path = _cache_file()
    if path is None or _LOADED_FROM == path:
        return
    _LOADED_FROM = path
    if os.path.exists(path):
        try:
            with open(path, "rb") as fh:
                _MEM.update(pickle.load(fh))
        except Exception:
            pass


def get(key):
    _load()
    return _MEM.get(key)


def put(key, value, flush_every: int = 500):
    global _DIRTY
    _MEM[key] = value
    _DIRTY += 1
    path = _cache_file()
    if path is not None and _DIRTY >= flush_every:
        flush()


def flush():
    global _DIRTY
    path = _cache_file()
    if path is None or _DIRTY == 0:
        return
    tmp = path + ".tmp"
    try:
        with open(tmp, "wb") as fh:
            pickle.dump(_MEM, fh)
        os.replace(tmp, path)
        _DIRTY = 0
    except Exception:
        pass


def mp_key(k: float, nu: complex, r: float, dps: int):
    return (round(float(k), 9), round(nu.real, 14), round(nu.imag, 14), round(float(r), 14), int(dps))
