"""Identity catalogs: load serialized identity families and verify them.

Each catalog file carries records with a left word, a right element, and the
parameters to instantiate (format: see docs/CATALOGS.md).  Verification
evaluates both sides through the expression layer at every requested
parameter value and compares normal forms; failures are reported as data.
"""

from __future__ import annotations

import json
from importlib import resources

from .expressions import AlgebraContext, parse
from .presentations import dq_cn, dq_gl2_plus, oq_gl2_plus

CATALOG_FILES = {
    "dq3-beta": "dq3_beta.json",
    "oq-gl2": "oq_gl2.json",
    "dq-gl2-det": "dq_gl2_det.json",
    "dq-gl2-cross": "dq_gl2_cross.json",
}

_ALGEBRA_FACTORIES = {
    "dq3": lambda mode: dq_cn(3, mode),
    "oq_gl2": oq_gl2_plus,
    "dq_gl2": dq_gl2_plus,
}


def list_catalogs():
    return sorted(CATALOG_FILES)


def load_catalog(name):
    try:
        filename = CATALOG_FILES[name]
    except KeyError:
        raise KeyError(f"unknown catalog {name!r}; available: {list_catalogs()}") from None
    path = resources.files("qweyl").joinpath("catalogs", filename)
    data = json.loads(path.read_text())
    if data.get("schema") != "qweyl-catalog/1":
        raise ValueError(f"catalog {name} has unsupported schema {data.get('schema')!r}")
    return data


class CatalogReport:
    def __init__(self, catalog, algebra):
        self.catalog = catalog
        self.algebra = algebra
        self.rows = []

    def add(self, identity, env, ok, detail=None):
        self.rows.append({"identity": identity, "env": dict(env), "ok": ok, "detail": detail})

    @property
    def ok(self):
        return all(r["ok"] for r in self.rows)

    @property
    def passed(self):
        return sum(1 for r in self.rows if r["ok"])

    @property
    def failed(self):
        return sum(1 for r in self.rows if not r["ok"])

    def __str__(self):
        head = f"catalog {self.catalog} on {self.algebra}: {self.passed}/{len(self.rows)} instances pass"
        if self.ok:
            return head
        lines = [head]
        for r in self.rows:
            if not r["ok"]:
                lines.append(f"  FAIL {r['identity']} at {r['env']}: {r['detail']}")
        return "\n".join(lines)


def verify_catalog(catalog_name, presentation=None, n_max=4, m_max=4, mode="generic"):
    """Instantiate every identity in a catalog and reduce both sides.

    The presentation defaults to the catalog's own algebra in the given
    mode.  Returns a CatalogReport; nothing raises on a failed identity.
    """
    data = load_catalog(catalog_name)
    if presentation is None:
        presentation = _ALGEBRA_FACTORIES[data["algebra"]](mode)
    report = CatalogReport(catalog_name, presentation.name)
    for record in data["identities"]:
        mins = record.get("min", {})
        for env in _environments(record.get("params", []), mins, n_max, m_max):
            ok, detail = verify_identity(presentation, record["lhs"], record["rhs"], env)
            report.add(record["name"], env, ok, detail)
    return report


def verify_identity(presentation, lhs, rhs, env=None):
    """Reduce both sides of one identity; returns (ok, detail)."""
    ctx = AlgebraContext(presentation, env or {})
    left = parse(lhs).eval(ctx)
    right = parse(rhs).eval(ctx)
    if left == right:
        return True, None
    return False, f"difference {left - right}"


def _environments(params, mins, n_max, m_max):
    if not params:
        return [{}]
    bounds = {"n": n_max, "m": m_max}
    envs = [{}]
    for p in params:
        lo = mins.get(p, 1)
        hi = bounds.get(p, n_max)
        envs = [dict(e, **{p: v}) for e in envs for v in range(lo, hi + 1)]
    return envs
