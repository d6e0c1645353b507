"""Text file formats for triples and actions, plus run manifests."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .algebra import field_of_order, semifield_load
from .errors import BudgetExceeded, InputError, VerificationFailure
from .groups import DENSE_CAP, DenseGroup, Group, PermutationCarrier, Subgroup, group_load
from .plane import Collineation, CollineationGroup, ProjectivePlane, lines_from_points, permutation_action
from .soft import SoftTriple

SHIPPED_SEMIFIELD = Path(__file__).parent / "data" / "semifield16.sf"


# -- construction recipes ---------------------------------------------------------

def recipe_string(kind: str, **params) -> str:
    parts = [f"{k}={v}" for k, v in params.items() if v is not None]
    return ":".join(["construct", kind] + parts)


def parse_recipe(text: str) -> tuple[str, dict]:
    parts = text.split(":")
    if len(parts) < 2 or parts[0] != "construct":
        raise InputError(f"not a construction recipe: {text!r}")
    params = {}
    for p in parts[2:]:
        if "=" not in p:
            raise InputError(f"malformed parameter {p!r} in {text!r}")
        k, v = p.split("=", 1)
        params[k] = v
    return parts[1], params


def _int(params, key, default=None) -> int:
    if key not in params:
        if default is None:
            raise InputError(f"construction needs {key}=...")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise InputError(f"{key} must be an integer, got {params[key]!r}") from None


def load_map(path) -> list[int]:
    text = Path(path).read_text()
    try:
        return [int(v) for ln in text.splitlines() if not ln.startswith("#") for v in ln.split()]
    except ValueError:
        raise InputError(f"{path}: additive map must list integers") from None


def construct(kind: str, params: dict, base_dir: Path = Path(".")) -> SoftTriple:
    """Rebuild a triple from a construction recipe."""
    from .constructions import extend_by_automorphism, frobenius, heisenberg, likeable

    def resolve(p):
        p = Path(p)
        return p if p.is_absolute() else base_dir / p

    if kind == "heisenberg":
        if "semifield" in params:
            src = params["semifield"]
            table = semifield_load(SHIPPED_SEMIFIELD if src == "shipped16" else resolve(src))
            return heisenberg(table)
        return heisenberg(field_of_order(_int(params, "q")))
    if kind == "likeable":
        l = load_map(resolve(params["l"])) if "l" in params else None
        return likeable(_int(params, "q"), l=l)
    if kind == "decorate":
        base = params.get("base", "heisenberg")
        q = _int(params, "q")
        if base == "heisenberg":
            t = heisenberg(field_of_order(q))
        elif base == "likeable":
            t = likeable(q)
        else:
            raise InputError(f"unknown base construction {base!r}")
        F = t.meta.get("ring") if base == "heisenberg" else t.meta["field"]
        return extend_by_automorphism(t, frobenius(F, _int(params, "e", 1)))
    raise InputError(f"unknown construction {kind!r}")


# -- triples ----------------------------------------------------------------------

def triple_dumps(t: SoftTriple, header: str) -> str:
    rows = [f"TRIPLE {header}"]
    for name, S in (("A", t.A), ("B", t.B), ("M", t.M)):
        rows.append(f"{name}: " + " ".join(map(str, S.members.tolist())))
    return "\n".join(rows) + "\n"


def triple_loads(text: str, base_dir: Path = Path(".")):
    """Return (G, {"A": ids, "B": ids, "M": ids}, header); subgroups are not yet checked."""
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or not rows[0].startswith("TRIPLE ") or len(rows[0].split()) != 2:
        raise InputError("triple file must start with 'TRIPLE <group file or construction recipe>'")
    header = rows[0].split()[1]
    ids = {}
    for ln in rows[1:]:
        key, _, rest = ln.partition(":")
        key = key.strip()
        if key not in ("A", "B", "M"):
            raise InputError(f"unexpected triple line {ln[:40]!r}")
        try:
            ids[key] = np.array([int(v) for v in rest.split()], dtype=np.int64)
        except ValueError:
            raise InputError(f"non-integer id in subgroup {key}") from None
    if set(ids) != {"A", "B", "M"}:
        raise InputError("triple file needs A:, B: and M: lines")
    if header.startswith("construct:"):
        G = construct(*parse_recipe(header), base_dir=base_dir).G
    else:
        path = Path(header)
        G = group_load(path if path.is_absolute() else base_dir / path)
    for key, v in ids.items():
        if len(v) and (v.min() < 0 or v.max() >= G.order):
            raise InputError(f"subgroup {key} lists ids outside 0..{G.order - 1}")
    return G, ids, header


def triple_load(path):
    path = Path(path)
    return triple_loads(path.read_text(), base_dir=path.parent)


def dense_table(G: Group) -> np.ndarray:
    if G.order > DENSE_CAP:
        raise BudgetExceeded(f"dense table capped at {DENSE_CAP} elements")
    e = np.arange(G.order, dtype=np.int64)
    return np.stack([G.mul(np.full(G.order, x), e) for x in e])


def as_dense(G: Group) -> DenseGroup:
    if isinstance(G, DenseGroup):
        return G
    return DenseGroup(dense_table(G), name=G.name, check=False)


# -- actions --------------------------------------------------------------------------

def action_dumps(action: CollineationGroup) -> str:
    """Generators of a collineation group as point permutations."""
    gens = list(action.carrier.generators)
    rows = action.point_images(gens) if gens else np.zeros((0, action.plane.n_points), dtype=np.int64)
    out = [f"ACTION {action.plane.n_points} {len(rows)}"]
    out += [" ".join(map(str, r)) for r in rows.tolist()]
    return "\n".join(out) + "\n"


def action_loads(text: str) -> np.ndarray:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0][0] != "ACTION" or len(rows[0]) != 3:
        raise InputError("action file must start with 'ACTION points count'")
    try:
        npts, count = int(rows[0][1]), int(rows[0][2])
        gens = np.array([[int(v) for v in r] for r in rows[1:]], dtype=np.int64).reshape(-1, npts)
    except ValueError:
        raise InputError("malformed action file") from None
    if len(gens) != count:
        raise InputError(f"expected {count} generators, found {len(gens)}")
    for g in gens:
        if not np.array_equal(np.sort(g), np.arange(npts)):
            raise InputError("action generator is not a permutation")
    return gens


def generate_permutations(gens: np.ndarray, degree: int, budget: int) -> np.ndarray:
    """All products of the generators, identity first, in BFS order."""
    ident = np.arange(degree, dtype=np.int64)
    seen = {ident.tobytes()}
    out = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = g[p]                  # apply p, then g
                key = q.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(q)
                    nxt.append(q)
                    if len(out) > budget:
                        raise BudgetExceeded(f"group generated by the action exceeds {budget} elements")
        frontier = nxt
    return np.array(out)


def action_from_generators(plane: ProjectivePlane, gens: np.ndarray, budget: int,
                           name: str = "H") -> CollineationGroup:
    if gens.shape[1] != plane.n_points:
        raise InputError(f"action has degree {gens.shape[1]}, plane has {plane.n_points} points")
    for i, (g, l) in enumerate(zip(gens, lines_from_points(plane, gens))):
        if not Collineation(g, l).preserves(plane):
            raise VerificationFailure(f"action generator {i} is not a collineation", i)
    perms = generate_permutations(gens, plane.n_points, budget)
    return permutation_action(plane, PermutationCarrier(perms, name=name, check=False), name=name)


# -- manifests ------------------------------------------------------------------------

def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, argv, inputs, outputs, seed: int, version: str):
    data = {
        "command": list(argv),
        "version": version,
        "seed": seed,
        "inputs": {str(p): sha256(p) for p in inputs},
        "outputs": {str(p): sha256(p) for p in outputs},
    }
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return data


def subgroup_of(G: Group, ids, name: str) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[ids] = True
    return Subgroup(G, mask, verify=True)
