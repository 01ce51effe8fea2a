"""File formats: CSV tables, stable JSON, exact ray serialization, the ray cache."""

import csv
import hashlib
import json
import os
import zlib
from fractions import Fraction

import mpmath

from . import __version__
from ._arith import real_str
from .potential import AngleRational
from .rays import DEFAULT_RAY_TOL, DEFAULT_STEPS, RayPolyline


def fmt(x):
    """Table cell text: full precision for numbers, '' for None."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, str, Fraction)):
        return str(x)
    return real_str(x)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def jsonable(x):
    """Plain JSON values; complex numbers become [re, im] pairs."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    ctx = getattr(x, "context", None)
    if ctx is not None:
        if isinstance(x, ctx.mpc):
            return [real_str(x.real), real_str(x.imag)]
        return real_str(x)
    if isinstance(x, float) and not (x == x and abs(x) != float("inf")):
        return repr(x)
    return x


def dumps(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


# exact encodings ---------------------------------------------------------

def _enc_real(x):
    mpf = getattr(x, "_mpf_", None)
    if mpf is None:
        return float(x).hex()
    sign, man, exp, bc = mpf
    return [sign, hex(int(man)), int(exp), int(bc)]


def _enc_point(z):
    ctx = getattr(z, "context", None)
    if ctx is None:
        z = complex(z)
        return {"re": z.real.hex(), "im": z.imag.hex()}
    return {"prec": ctx.prec, "re": _enc_real(z.real), "im": _enc_real(z.imag)}


def _dec_real(v):
    sign, man, exp, bc = v
    return (int(sign), mpmath.libmp.MPZ(int(man, 16)), int(exp), int(bc))


def _dec_point(v, contexts):
    if "prec" not in v:
        return complex(float.fromhex(v["re"]), float.fromhex(v["im"]))
    prec = v["prec"]
    ctx = contexts.get(prec)
    if ctx is None:
        ctx = contexts[prec] = mpmath.MPContext()
        ctx.prec = prec
    return ctx.make_mpc((_dec_real(v["re"]), _dec_real(v["im"])))


def ray_to_dict(ray: RayPolyline):
    return {
        "plane": ray.plane,
        "d": ray.d,
        "angle": f"{ray.angle.numerator}/{ray.angle.denominator}",
        "c": None if ray.c is None else {"re": ray.c.real.hex(), "im": ray.c.imag.hex()},
        "steps_per_halving": ray.steps_per_halving,
        "samples": [[float(t).hex(), _enc_point(z)] for t, z in ray.samples],
    }


def ray_from_dict(data) -> RayPolyline:
    contexts = {}
    c = data["c"]
    return RayPolyline(
        data["plane"], data["d"], AngleRational.parse(data["angle"]),
        None if c is None else complex(float.fromhex(c["re"]), float.fromhex(c["im"])),
        tuple((float.fromhex(t), _dec_point(z, contexts)) for t, z in data["samples"]),
        data["steps_per_halving"])


def write_ray_csv(path, ray: RayPolyline):
    rows = [(t, z.real, z.imag, s) for (t, z), s in zip(ray.samples, ray.arc_prefix)]
    write_csv(path, ["t", "re", "im", "arc_prefix"], rows)


# cache -------------------------------------------------------------------

def cache_dir():
    return os.environ.get("RAYCACHE_DIR", os.path.join(".", ".raycache"))


def cache_key(plane, d, angle, t_start, t_min, steps=DEFAULT_STEPS, ray_tol=DEFAULT_RAY_TOL,
              c=None, version=__version__):
    """Canonical text of the parameters that determine a traced ray."""
    angle = AngleRational(angle)
    cpart = "-" if c is None else f"{complex(c).real.hex()},{complex(c).imag.hex()}"
    return "|".join([
        "ray", plane, str(int(d)), f"{angle.numerator}/{angle.denominator}",
        float(t_start).hex(), float(t_min).hex(), str(int(steps)), float(ray_tol).hex(),
        cpart, version,
    ])


def _cache_path(key, root=None):
    digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
    return os.path.join(root or cache_dir(), digest[:2], digest + ".json.z")


def cache_load(key, root=None):
    path = _cache_path(key, root)
    if not os.path.exists(path):
        return None
    with open(path, "rb") as fh:
        data = json.loads(zlib.decompress(fh.read()).decode("utf-8"))
    if data.get("key") != key:
        return None
    return ray_from_dict(data["ray"])


def cache_store(key, ray, root=None):
    path = _cache_path(key, root)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    blob = json.dumps({"key": key, "ray": ray_to_dict(ray)}, sort_keys=True).encode("utf-8")
    tmp = path + f".{os.getpid()}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(zlib.compress(blob, 6))
    os.replace(tmp, path)
    return path
