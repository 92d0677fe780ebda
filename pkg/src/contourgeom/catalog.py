"""Built-in test surfaces and the surface-spec JSON format.

The catalog holds the graph surfaces used throughout the docs and tests
(two paraboloids, the plain saddle, the perturbed saddle with a cubic
term, a hemisphere and a parabolic cylinder).  Spec files describe a
surface either as a catalog entry, a Monge polynomial height z = h(x, y),
or three polynomial components; parsing and serialising round-trip
stably.
"""

import json

from .errors import ContractError
from .fields import PolyField, sqrt_field, x_var, y_var
from .surface import SurfacePatch

SPEC_SCHEMA = "contourgeom/surface-spec#1"

CATALOG_NAMES = ("f_plus", "f_minus", "f0", "f1", "sphere", "cylinder")

_DEFAULT_DOMAINS = {
    "sphere": (-0.5, 0.5, -0.5, 0.5),
}


def _catalog_height(name, radius=1.0):
    x, y = x_var(), y_var()
    if name == "f_plus":
        return 2 * x**2 + y**2
    if name == "f_minus":
        return 2 * x**2 - y**2
    if name == "f0":
        return x * y
    if name == "f1":
        return x * y + y**3
    if name == "cylinder":
        return x**2
    if name == "sphere":
        # lower-hemisphere graph: the normal at the pole points at the
        # center, so the normal curvature there is +1/radius
        return -sqrt_field(radius * radius - x**2 - y**2)
    raise ContractError(f"unknown catalog surface {name!r}")


def monge_patch(height_field, domain=(-1.0, 1.0, -1.0, 1.0), name=None):
    """Graph patch (x, y, h(x, y)) for a height field or coeff dict."""
    if isinstance(height_field, dict):
        height_field = PolyField(height_field)
    return SurfacePatch((x_var(), y_var(), height_field), domain, name=name)


def catalog_surface(name, radius=1.0, domain=None):
    if name not in CATALOG_NAMES:
        raise ContractError(
            f"unknown catalog surface {name!r}; choices: {CATALOG_NAMES}"
        )
    if domain is None:
        domain = _DEFAULT_DOMAINS.get(name, (-1.0, 1.0, -1.0, 1.0))
        if name == "sphere" and radius != 1.0:
            s = 0.5 * radius
            domain = (-s, s, -s, s)
    return monge_patch(_catalog_height(name, radius), domain, name=name)


def random_cubic_monge(rng, hxy_range=(0.2, 5.0), hyyy_range=(0.2, 5.0),
                       hyy=0.0, other_scale=1.0, hyyy_zero=False):
    """Seeded random cubic Monge patch with (0, 1) asymptotic at the origin.

    Returns (patch, partials) where partials holds the exact height
    partials at the origin for oracle comparisons.  h_yy defaults to 0 so
    that d/dy is an asymptotic direction; |h_xy| and |h_yyy| are drawn
    uniformly from the given ranges with random signs.
    """
    hxy = rng.uniform(*hxy_range) * rng.choice([-1.0, 1.0])
    hyyy = 0.0 if hyyy_zero else rng.uniform(*hyyy_range) * rng.choice([-1.0, 1.0])
    c20, c30, c21, c12 = rng.uniform(-other_scale, other_scale, size=4)
    coeffs = {
        (2, 0): c20,
        (1, 1): hxy,
        (0, 2): 0.5 * hyy,
        (3, 0): c30,
        (2, 1): c21,
        (1, 2): c12,
        (0, 3): hyyy / 6.0,
    }
    partials = {
        (2, 0): 2 * c20,
        (1, 1): hxy,
        (0, 2): hyy,
        (3, 0): 6 * c30,
        (2, 1): 2 * c21,
        (1, 2): 2 * c12,
        (0, 3): hyyy,
    }
    return monge_patch(coeffs, name="random_cubic"), partials


# ---------------------------------------------------------------------------
# spec files


def _coeff_triples(poly):
    return sorted([int(i), int(j), float(c)] for (i, j), c in poly.coeffs.items())


def _poly_from_triples(triples):
    out = {}
    for i, j, c in triples:
        out[(int(i), int(j))] = out.get((int(i), int(j)), 0.0) + float(c)
    return PolyField(out)


def normalize_spec(spec):
    """Validated, canonically ordered copy of a spec dict."""
    if not isinstance(spec, dict):
        raise ContractError("surface spec must be a JSON object")
    kind = spec.get("kind")
    out = {"schema": SPEC_SCHEMA, "kind": kind}
    domain = spec.get("domain")
    if domain is not None:
        if len(domain) != 4:
            raise ContractError("domain must be [umin, umax, vmin, vmax]")
        out["domain"] = [float(b) for b in domain]
    if kind == "catalog":
        name = spec.get("catalog")
        if name not in CATALOG_NAMES:
            raise ContractError(f"unknown catalog name {name!r}")
        out["catalog"] = name
        if "radius" in spec:
            out["radius"] = float(spec["radius"])
    elif kind == "monge_poly":
        coeffs = spec.get("coeffs")
        if not coeffs:
            raise ContractError("monge_poly spec needs a coeffs list")
        out["coeffs"] = _coeff_triples(_poly_from_triples(coeffs))
    elif kind == "parametric_poly":
        comps = spec.get("components")
        if not comps or len(comps) != 3:
            raise ContractError("parametric_poly spec needs three component lists")
        out["components"] = [_coeff_triples(_poly_from_triples(c)) for c in comps]
    else:
        raise ContractError(f"unknown spec kind {kind!r}")
    return out


def patch_from_spec(spec):
    spec = normalize_spec(spec)
    kind = spec["kind"]
    domain = tuple(spec.get("domain", (-1.0, 1.0, -1.0, 1.0)))
    if kind == "catalog":
        return catalog_surface(
            spec["catalog"],
            radius=spec.get("radius", 1.0),
            domain=tuple(spec["domain"]) if "domain" in spec else None,
        )
    if kind == "monge_poly":
        return monge_patch(
            _poly_from_triples(spec["coeffs"]), domain, name="monge_poly"
        )
    comps = [_poly_from_triples(c) for c in spec["components"]]
    return SurfacePatch(comps, domain, name="parametric_poly")


def spec_to_json(spec):
    return json.dumps(normalize_spec(spec), indent=2, sort_keys=True) + "\n"


def load_spec_file(path):
    """Parse a spec file; raises ContractError with position info on bad JSON."""
    with open(path) as fh:
        text = fh.read()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContractError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return normalize_spec(spec)


def spec_for_catalog(name, radius=1.0):
    spec = {"kind": "catalog", "catalog": name}
    if radius != 1.0:
        spec["radius"] = radius
    return normalize_spec(spec)
