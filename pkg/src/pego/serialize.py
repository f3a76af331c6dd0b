"""JSON and CSV wire formats plus the tiny function-spec language.

Conventions shared by every writer here: documents carry a ``schema_version``
field, keys are emitted sorted, complex numbers are ``[re, im]`` pairs,
matrices are row-major nested lists, groups and irrep labels appear in their
string forms, and nothing time- or path-dependent is ever written.  Identical
inputs therefore serialize to byte-identical text.
"""

import json
import math

import numpy as np

from . import fourier, irreps
from .compactness import FamilySpec
from .families import FAMILY_KINDS, builtin_family
from .groups import haar_quadrature, parse_group

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """Malformed document or function spec."""


def dumps(doc):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cpair(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_wire(m):
    m = np.asarray(m, dtype=complex)
    return [[_cpair(z) for z in row] for row in m]


def wire_to_matrix(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def point_coords(pt):
    """Flat real coordinate list; product coordinates are concatenated."""
    if pt.group.family == "product":
        out = []
        for comp in pt.coords:
            out.extend(point_coords(comp))
        return out
    return [float(c) for c in pt.coords]


def coord_columns(group, prefix=""):
    fam = group.family
    if fam == "cyclic":
        return [prefix + "j"]
    if fam == "dihedral":
        return [prefix + "r", prefix + "s"]
    if fam == "torus":
        return [prefix + f"theta{i + 1}" for i in range(group.n)]
    if fam == "su2":
        return [prefix + c for c in ("qw", "qx", "qy", "qz")]
    cols = []
    for i, factor in enumerate(group.factors):
        cols.extend(coord_columns(factor, prefix=f"{prefix}g{i + 1}_"))
    return cols


# -- sampled functions -------------------------------------------------------

def function_to_json(f):
    rule = f.rule
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "sampled_function",
        "group": rule.group.name,
        "resolution": rule.resolution,
        "name": f.name,
        "values": [_cpair(z) for z in f.values],
    }


def function_from_json(doc, rule):
    if doc.get("type") != "sampled_function":
        raise FormatError("not a sampled_function document")
    if doc["group"] != rule.group.name:
        raise FormatError(
            f"function group {doc['group']!r} does not match rule group "
            f"{rule.group.name!r}"
        )
    vals = np.array([complex(re, im) for re, im in doc["values"]])
    if vals.shape[0] != len(rule.nodes):
        raise FormatError(
            f"{vals.shape[0]} values for a rule with {len(rule.nodes)} nodes"
        )
    return fourier.SampledFunction(rule, vals, name=doc.get("name", ""))


def function_to_csv(f):
    rule = f.rule
    cols = coord_columns(rule.group)
    lines = [",".join(cols + ["re", "im"])]
    for pt, z in zip(rule.nodes, f.values):
        coords = point_coords(pt)
        lines.append(",".join([repr(c) for c in coords] + [repr(float(z.real)), repr(float(z.imag))]))
    return "\n".join(lines) + "\n"


def function_from_csv(text, rule):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty csv")
    rows = lines[1:]
    if len(rows) != len(rule.nodes):
        raise FormatError(f"{len(rows)} rows for a rule with {len(rule.nodes)} nodes")
    vals = np.empty(len(rows), dtype=complex)
    for i, ln in enumerate(rows):
        parts = ln.split(",")
        vals[i] = complex(float(parts[-2]), float(parts[-1]))
    return fourier.SampledFunction(rule, vals)


# -- coefficients and norms --------------------------------------------------

def coefficients_to_json(coeffs):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "type": "fourier_coefficients",
        "group": coeffs.group.name,
        "cutoff": coeffs.cutoff,
        "entries": {lab.name: matrix_to_wire(coeffs[lab]) for lab in coeffs.labels},
    }
    if coeffs.l2_mass_total is not None:
        doc["l2_mass_total"] = float(coeffs.l2_mass_total)
    return doc


def coefficients_from_json(doc, group):
    if doc.get("type") != "fourier_coefficients":
        raise FormatError("not a fourier_coefficients document")
    if doc["group"] != group.name:
        raise FormatError("coefficient group does not match")
    labels = tuple(
        sorted((irreps.parse_label(group, s) for s in doc["entries"]),
               key=lambda lab: lab.sort_key)
    )
    entries = {lab: wire_to_matrix(doc["entries"][lab.name]) for lab in labels}
    return fourier.FourierCoefficients(
        group, labels, entries,
        cutoff=doc.get("cutoff"),
        l2_mass_total=doc.get("l2_mass_total"),
    )


def norm_report_to_json(report):
    return {
        "p": "inf" if math.isinf(report.p) else float(report.p),
        "subset": report.subset_names,
        "value": float(report.value),
        "truncated": bool(report.truncated),
    }


# -- profiles and verdicts ---------------------------------------------------

def decay_profile_to_json(profile):
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "decay_profile",
        "family": profile.family_name,
        "p": float(profile.p),
        "truncated": bool(profile.truncated),
        "steps": [
            {
                "step": k,
                "shell": int(max(lab.shell for lab in s.subset)),
                "subset_size": len(s.subset),
                "sup_tail": float(s.sup_tail),
                "per_member": [float(v) for v in s.per_member],
            }
            for k, s in enumerate(profile.steps)
        ],
    }


def decay_profile_csv(profile, family_column=False):
    head = "step,shell,sup_tail"
    lines = []
    for k, s in enumerate(profile.steps):
        shell = int(max(lab.shell for lab in s.subset))
        lines.append(f"{k},{shell},{s.sup_tail!r}")
    if family_column:
        head = "family," + head
        lines = [f"{profile.family_name},{ln}" for ln in lines]
    return head + "\n" + "\n".join(lines) + "\n"


def continuity_profile_to_json(profile):
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "continuity_profile",
        "family": profile.family_name,
        "p": float(profile.p),
        "path": profile.path,
        "ball_samples": int(profile.ball_samples),
        "seed": int(profile.seed),
        "deltas": [float(d) for d in profile.deltas],
        "omegas": [float(w) for w in profile.omegas],
        "per_member": [[float(v) for v in row] for row in profile.per_member],
    }


def continuity_profile_csv(profile, family_column=False):
    head = "delta,omega"
    lines = [f"{float(d)!r},{float(w)!r}" for d, w in zip(profile.deltas, profile.omegas)]
    if family_column:
        head = "family," + head
        lines = [f"{profile.family_name},{ln}" for ln in lines]
    return head + "\n" + "\n".join(lines) + "\n"


def _flag_to_json(flag):
    witness = flag.witness
    if witness is None:
        wit = None
    elif hasattr(witness, "names"):
        wit = {"labels": witness.names}
    else:
        wit = float(witness)
    return {
        "flag": bool(flag.flag),
        "witness": wit,
        "certificate": flag.certificate,
        "evidence": flag.evidence,
    }


def verdict_to_json(verdict):
    bnd = verdict.boundedness
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "pego_verdict",
        "family": verdict.family_name,
        "epsilon": float(verdict.epsilon),
        "conclusion": verdict.conclusion,
        "boundedness": {
            "sup_norm": float(bnd.sup_norm),
            "bounded": bool(bnd.bounded),
            "trend": bnd.trend,
            "evidence": bnd.evidence,
            "per_member": [float(v) for v in bnd.per_member],
        },
        "uniform_decay": _flag_to_json(verdict.uniform_decay),
        "equicontinuous": _flag_to_json(verdict.equicontinuous),
        "config": verdict.config,
    }


# -- function specs and family files -----------------------------------------

def parse_function_spec(spec, rule):
    """Build a SampledFunction from the tiny spec language.

    const:VALUE        constant function (VALUE parsed as a complex scalar)
    char:K or LABEL    character of a label; bare integer K means the obvious
                       one-dimensional character (cyclic chi:K, torus:1 k=K)
    entry:LABEL:I:J    matrix entry function, 1-based indices
    file:PATH          sampled values from a function JSON or CSV file
    """
    group = rule.group
    head, _, rest = spec.partition(":")
    if head == "const":
        try:
            c = complex(rest)
        except ValueError as exc:
            raise FormatError(f"bad constant {rest!r}") from exc
        f = fourier.constant_function(rule, c)
        f.name = spec
        return f
    if head == "char":
        label = irreps.parse_label(group, rest)
        stack = irreps.irrep_stack(label, rule)
        vals = np.trace(stack, axis1=1, axis2=2)
        return fourier.SampledFunction(rule, vals, name=f"char:{label.name}")
    if head == "entry":
        parts = rest.rsplit(":", 2)
        if len(parts) != 3:
            raise FormatError(f"entry spec needs entry:LABEL:I:J, got {spec!r}")
        label = irreps.parse_label(group, parts[0])
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise FormatError(f"bad entry indices in {spec!r}") from exc
        return fourier.matrix_entry_function(label, i, j, rule)
    if head == "file":
        with open(rest, "r", encoding="utf-8") as fh:
            text = fh.read()
        stripped = text.lstrip()
        if stripped.startswith("{"):
            return function_from_json(json.loads(text), rule)
        return function_from_csv(text, rule)
    raise FormatError(f"unknown function spec {spec!r}")


def family_from_json(doc):
    """Build (FamilySpec, QuadratureRule) from a family definition document.

    Either ``kind`` (a builtin constructor with ``params``) or ``members``
    (a list of function specs) must be present, along with ``group`` and,
    for infinite groups, ``resolution``.
    """
    if not isinstance(doc, dict):
        raise FormatError("family document must be a JSON object")
    try:
        group = parse_group(doc["group"])
    except KeyError as exc:
        raise FormatError("family document lacks 'group'") from exc
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    resolution = doc.get("resolution")
    if resolution is None:
        if not group.is_finite:
            raise FormatError("'resolution' is required for infinite groups")
        resolution = 1
    rule = haar_quadrature(group, resolution=resolution)
    seed = doc.get("seed")
    if "kind" in doc:
        kind = doc["kind"]
        if kind not in FAMILY_KINDS:
            raise FormatError(
                f"unknown family kind {kind!r}; known: {sorted(FAMILY_KINDS)}"
            )
        fam = builtin_family(kind, rule, params=doc.get("params"), seed=seed)
    elif "members" in doc:
        specs = doc["members"]
        if not isinstance(specs, list) or not specs:
            raise FormatError("'members' must be a nonempty list of specs")
        members = [parse_function_spec(s, rule) for s in specs]
        fam = FamilySpec(
            members=members,
            name=doc.get("name", "custom"),
            param_space=doc.get("param_space", "compact"),
            seed=seed,
        )
    else:
        raise FormatError("family document needs 'kind' or 'members'")
    if "name" in doc:
        fam.name = doc["name"]
    return fam, rule
