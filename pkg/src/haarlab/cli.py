"""haarlab: deterministic JSON verification reports.

Exit codes: 0 all checks passed, 1 a mathematical check failed (the
witness is in the report), 2 malformed input.  Reports are byte-stable:
sorted keys, canonical "p/q" rationals, LF line endings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import covering as covering_mod
from . import groups as groups_mod
from . import measure as measure_mod
from . import plane as plane_mod
from .errors import HaarlabError
from .topology import FiniteSpace, bit_indices, mask_of

SCHEMA_VERSION = "1"

COMMANDS = (
    "enumerate",
    "verify-haar",
    "construct",
    "quotient",
    "counterexample",
    "fubini",
    "plane",
)


class InputError(Exception):
    """Malformed user input; maps to exit code 2."""


def frac_str(f: Fraction) -> str:
    f = Fraction(f)
    return f"{f.numerator}/{f.denominator}"


def parse_frac(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}: {exc}") from exc


def points_list(mask: int):
    return list(bit_indices(mask))


def _require_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise InputError(f"{where}: unknown fields {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise InputError(f"{where}: missing fields {sorted(missing)}")


def load_group(spec, max_order) -> groups_mod.FiniteGroup:
    if not isinstance(spec, dict):
        raise InputError("group spec must be an object")
    if "family" in spec:
        _require_keys(spec, {"family", "params"}, {"family"}, "group")
        family = spec["family"]
        params = spec.get("params", {})
        if family == "cyclic":
            g = groups_mod.cyclic(int(params["n"]))
        elif family == "dihedral":
            g = groups_mod.dihedral(int(params["n"]))
        elif family == "symmetric3":
            g = groups_mod.symmetric3()
        elif family == "quaternion8":
            g = groups_mod.quaternion8()
        elif family == "trivial":
            g = groups_mod.trivial_group()
        elif family == "product":
            factors = params.get("factors", [])
            if len(factors) != 2:
                raise InputError("product family needs exactly two factors")
            g = groups_mod.direct_product(
                load_group(factors[0], max_order),
                load_group(factors[1], max_order),
            )
        else:
            raise InputError(f"unknown family {family!r}")
    else:
        _require_keys(spec, {"name", "order", "table"}, {"order", "table"}, "group")
        try:
            g = groups_mod.FiniteGroup(
                spec["table"], name=spec.get("name", "group")
            )
        except (ValueError, KeyError) as exc:
            raise InputError(f"bad Cayley table: {exc}") from exc
        if g.order != spec["order"]:
            raise InputError("declared order does not match the table")
    if g.order > max_order:
        raise InputError(f"order {g.order} exceeds the cap {max_order}")
    return g


def load_top_group(group_spec, topo_spec, max_order) -> groups_mod.FiniteTopGroup:
    group = load_group(group_spec, max_order)
    if not isinstance(topo_spec, dict):
        raise InputError("topology spec must be an object")
    if "normal_subgroup" in topo_spec:
        _require_keys(topo_spec, {"normal_subgroup"}, {"normal_subgroup"}, "topology")
        n_mask = mask_of(int(x) for x in topo_spec["normal_subgroup"])
        try:
            space = groups_mod.coset_topology(group, n_mask)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif "opens" in topo_spec:
        _require_keys(topo_spec, {"opens"}, {"opens"}, "topology")
        try:
            space = FiniteSpace(
                group.order,
                [mask_of(int(x) for x in u) for u in topo_spec["opens"]],
            )
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError("topology spec needs normal_subgroup or opens")
    try:
        return groups_mod.validate_top_group(group, space)
    except HaarlabError as exc:
        raise InputError(f"incompatible topology: {exc}") from exc


def load_measure(spec, g) -> measure_mod.FiniteMeasure:
    _require_keys(spec, {"atom_masses"}, {"atom_masses"}, "measure")
    masses = tuple(parse_frac(s) for s in spec["atom_masses"])
    if any(m < 0 for m in masses):
        raise InputError("atom masses must be nonnegative")
    try:
        return measure_mod.FiniteMeasure(g, masses)
    except HaarlabError as exc:
        raise InputError(str(exc)) from exc


def load_cylinder(spec) -> plane_mod.CylinderSet:
    if not isinstance(spec, list):
        raise InputError("intervals must be a list")
    ivs = []
    for entry in spec:
        _require_keys(
            entry,
            {"lo", "hi", "lo_closed", "hi_closed"},
            {"lo", "hi"},
            "interval",
        )
        try:
            ivs.append(
                plane_mod.Interval(
                    parse_frac(entry["lo"]),
                    parse_frac(entry["hi"]),
                    bool(entry.get("lo_closed", True)),
                    bool(entry.get("hi_closed", True)),
                )
            )
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return plane_mod.CylinderSet(plane_mod.IntervalUnion(ivs))


def intervals_json(iu: plane_mod.IntervalUnion):
    return [
        {
            "lo": frac_str(iv.lo),
            "hi": frac_str(iv.hi),
            "lo_closed": iv.lo_closed,
            "hi_closed": iv.hi_closed,
        }
        for iv in iu.intervals
    ]


# -- command handlers: return (results, math_ok) ----------------------------


def cmd_enumerate(data, max_order):
    _require_keys(data, {"group"}, {"group"}, "input")
    group = load_group(data["group"], max_order)
    topologies = []
    for tg in groups_mod.group_topologies(group):
        n_mask = groups_mod.identity_closure(tg)
        dim, basis = measure_mod.haar_solution_space(tg)
        canon = measure_mod.canonical_haar(tg)
        topologies.append(
            {
                "normal_subgroup": points_list(n_mask),
                "atoms": [points_list(a) for a in tg.atoms],
                "haar_dimension": dim,
                "canonical_masses": [frac_str(m) for m in canon.atom_mass],
            }
        )
        del basis
    results = {"group": group.name, "order": group.order, "topologies": topologies}
    ok = all(t["haar_dimension"] == 1 for t in topologies)
    return results, ok


def cmd_verify_haar(data, max_order):
    _require_keys(
        data, {"group", "topology", "measure", "side"}, {"group", "topology", "measure"}, "input"
    )
    side = data.get("side", "left")
    if side not in ("left", "right"):
        raise InputError(f"side must be left or right, got {side!r}")
    tg = load_top_group(data["group"], data["topology"], max_order)
    mu = load_measure(data["measure"], tg)
    report = measure_mod.is_haar(tg, mu, side=side)
    witnesses = [
        {
            "kind": kind,
            "set": points_list(
                _atoms_to_points(tg, sel) if sel is not None else 0
            ),
            "element": elem,
        }
        for kind, sel, elem in report.witnesses
    ]
    results = {
        "side": side,
        "nonzero": report.nonzero,
        "left_invariant": report.left_invariant,
        "right_invariant": report.right_invariant,
        "locally_finite": report.locally_finite,
        "outer_regular": report.outer_regular,
        "inner_regular_on_opens": report.inner_regular_on_opens,
        "is_haar": report.is_haar,
        "witnesses": witnesses,
    }
    return results, report.is_haar


def _atoms_to_points(tg, sel):
    acc = 0
    for i in bit_indices(sel):
        acc |= tg.atoms[i]
    return acc


def cmd_construct(data, max_order):
    _require_keys(data, {"group", "topology", "k0"}, {"group", "topology", "k0"}, "input")
    tg = load_top_group(data["group"], data["topology"], max_order)
    k0 = mask_of(int(x) for x in data["k0"])
    try:
        tg.space.check_subset(k0)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if tg.space.interior(k0) == 0 or not tg.space.is_closed(k0):
        raise InputError("k0 must be closed with nonempty interior")
    mu = covering_mod.existence_via_covering(tg, k0)
    canon = measure_mod.canonical_haar(tg)
    scalar = None
    if all(
        mu.atom_mass[i] * canon.atom_mass[0] == canon.atom_mass[i] * mu.atom_mass[0]
        for i in range(len(tg.atoms))
    ):
        scalar = mu.atom_mass[0] / canon.atom_mass[0]
    # full (K:U) table over closed sets and open identity neighborhoods,
    # truncated to atoms and the full set past the size cap
    k_atoms = len(tg.atoms)
    truncated = k_atoms > 6
    if truncated:
        closed_sets = list(tg.atoms) + [tg.space.full]
        open_nbhds = [
            groups_mod.identity_closure(tg),
            tg.space.full,
        ]
    else:
        closed_sets = [c for c in tg.space.closed_sets() if c != 0]
        e_bit = tg.group.identity
        open_nbhds = [u for u in tg.space.opens if u >> e_bit & 1]
    table = [
        {
            "k": points_list(k),
            "u": points_list(u),
            "count": covering_mod.covering_number(
                covering_mod.CoveringProblem(tg, k, u)
            ).count,
        }
        for k in closed_sets
        for u in open_nbhds
    ]
    results = {
        "covering_table": table,
        "table_truncated": truncated,
        "measure": [frac_str(m) for m in mu.atom_mass],
        "canonical_scalar": frac_str(scalar) if scalar is not None else None,
    }
    report = measure_mod.is_haar(tg, mu)
    return results, report.is_haar and scalar is not None


def cmd_quotient(data, max_order):
    _require_keys(data, {"group", "topology"}, {"group", "topology"}, "input")
    tg = load_top_group(data["group"], data["topology"], max_order)
    q = groups_mod.quotient(tg)
    canon = measure_mod.canonical_haar(tg)
    pushed = measure_mod.pushforward(q, canon)
    pulled = measure_mod.pullback(q, pushed)
    roundtrip_ok = pulled == canon
    pushed_haar = measure_mod.is_haar(q.quotient, pushed).is_haar
    results = {
        "normal_subgroup": points_list(groups_mod.identity_closure(tg)),
        "atoms": [points_list(a) for a in tg.atoms],
        "quotient_order": q.quotient.group.order,
        "projection": list(q.proj),
        "pushforward_masses": [frac_str(m) for m in pushed.atom_mass],
        "pullback_roundtrip_ok": roundtrip_ok,
        "pushforward_is_haar": pushed_haar,
    }
    return results, roundtrip_ok and pushed_haar


def cmd_counterexample(data, max_order, probe_bound_flag=None):
    _require_keys(data, {"c", "probe_bound"}, {"c"}, "input")
    c = parse_frac(data["c"])
    if c < 0:
        raise InputError("hypothesized mass must be nonnegative")
    if probe_bound_flag is not None:
        probe_bound = probe_bound_flag
    elif "probe_bound" in data:
        probe_bound = parse_frac(data["probe_bound"])
    else:
        probe_bound = Fraction(1)
    if probe_bound <= 0:
        raise InputError("probe bound must be positive")
    cert = plane_mod.counterexample_bk(c, probe_bound)
    verified = plane_mod.verify_bk_certificate(cert)
    results = {
        "verdict": cert.verdict,
        "verified": verified,
        "translate_count": len(cert.translates),
        "translates": [
            {
                "x": [frac_str(t.x_lo), frac_str(t.x_hi)],
                "y": [frac_str(t.y_lo), frac_str(t.y_hi)],
            }
            for t in cert.translates
        ],
        "grid_offsets": [list(o) for o in cert.grid_offsets],
    }
    return results, verified


def cmd_fubini(data, max_order):
    _require_keys(data, {"group1", "group2"}, {"group1", "group2"}, "input")
    tgs = []
    for key in ("group1", "group2"):
        entry = data[key]
        _require_keys(entry, {"group", "topology"}, {"group", "topology"}, key)
        tgs.append(load_top_group(entry["group"], entry["topology"], max_order))
    g, h = tgs
    if g.group.order * h.group.order > max_order:
        raise InputError("combined order exceeds the cap")
    mu = measure_mod.canonical_haar(g)
    lam = measure_mod.canonical_haar(h)
    oh = h.group.order
    from .topology import PointFunction

    checks = []
    ok = True
    for i, a in enumerate(g.atoms):
        for j, b in enumerate(h.atoms):
            values = [
                Fraction((a >> x & 1) and (b >> y & 1))
                for x in range(g.group.order)
                for y in range(oh)
            ]
            f = PointFunction(tuple(values))
            lhs, rhs = measure_mod.fubini_check(g, h, f, mu, lam)
            equal = lhs == rhs
            ok = ok and equal
            checks.append(
                {
                    "f": f"indicator_atom_{i}x{j}",
                    "lhs": frac_str(lhs),
                    "rhs": frac_str(rhs),
                    "equal": equal,
                }
            )
    return {"checks": checks}, ok


def cmd_plane(data, max_order):
    _require_keys(data, {"intervals", "shift", "eps"}, {"intervals"}, "input")
    e = load_cylinder(data["intervals"])
    results = {
        "base": intervals_json(e.base),
        "mass": frac_str(plane_mod.haar_v(e)),
    }
    ok = True
    if "shift" in data:
        shift = data["shift"]
        if not isinstance(shift, list) or len(shift) != 2:
            raise InputError("shift must be a pair of rationals")
        a, b = (parse_frac(s) for s in shift)
        moved = plane_mod.translate_v(e, a, b)
        results["shifted"] = intervals_json(moved.base)
        results["shifted_mass"] = frac_str(plane_mod.haar_v(moved))
        ok = ok and plane_mod.haar_v(moved) == plane_mod.haar_v(e)
    if "eps" in data:
        eps = parse_frac(data["eps"])
        if eps <= 0:
            raise InputError("eps must be positive")
        inner, outer = plane_mod.regularity_gap(e, eps)
        mass = plane_mod.haar_v(e)
        results["inner"] = intervals_json(inner.base)
        results["inner_mass"] = frac_str(plane_mod.haar_v(inner))
        results["outer"] = intervals_json(outer.base)
        results["outer_mass"] = frac_str(plane_mod.haar_v(outer))
        ok = ok and mass - plane_mod.haar_v(inner) <= eps
        ok = ok and plane_mod.haar_v(outer) - mass <= eps
    return results, ok


# -- driver ------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="haarlab",
        description="Verify Haar-measure facts on finite groups and the seminorm plane.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="path to the JSON input")
    parser.add_argument("--output", default=None, help="path for the JSON report (default stdout)")
    parser.add_argument("--max-order", type=int, default=None)
    parser.add_argument("--probe-bound", default=None, help="rational p/q for counterexample")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    max_order = args.max_order
    if max_order is None:
        env = os.environ.get("HAARLAB_MAX_ORDER")
        max_order = int(env) if env else groups_mod.MAX_ORDER

    def emit(report):
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        emit(_error_report(args.command, f"cannot read input: {exc}"))
        return 2

    try:
        if args.command == "counterexample":
            probe = parse_frac(args.probe_bound) if args.probe_bound else None
            results, ok = cmd_counterexample(data, max_order, probe)
        elif args.command == "enumerate":
            results, ok = cmd_enumerate(data, max_order)
        elif args.command == "verify-haar":
            results, ok = cmd_verify_haar(data, max_order)
        elif args.command == "construct":
            results, ok = cmd_construct(data, max_order)
        elif args.command == "quotient":
            results, ok = cmd_quotient(data, max_order)
        elif args.command == "fubini":
            results, ok = cmd_fubini(data, max_order)
        elif args.command == "plane":
            results, ok = cmd_plane(data, max_order)
        else:  # pragma: no cover - argparse rejects unknown commands
            raise InputError(f"unknown command {args.command}")
    except InputError as exc:
        emit(_error_report(args.command, str(exc)))
        return 2
    except HaarlabError as exc:
        emit(_error_report(args.command, f"{type(exc).__name__}: {exc}"))
        return 2

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": data,
        "results": results,
        "passed": ok,
    }
    emit(report)
    return 0 if ok else 1


def _error_report(command, message):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": message,
    }


def main():  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
