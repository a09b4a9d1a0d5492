"""Command-line driver: input parsing, reports and the verification battery.

    orbihh <verb> (--input FILE | --builtin NAME) [--json OUT] [--csv OUT]
                  [--maxdeg N] [--seed N] [--trials N]

Verbs: compute, verify, molien, cocycle, all.
Exit codes: 0 ok, 2 input/parse error, 3 group cap exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .arith import Cyclotomic, ScalarParseError, format_scalar, parse_scalar
from .builtins import InputSpec, UnknownBuiltin, builtin
from .detalg import DetAlgebra
from .fiberalg import FiberAlgebra, MolienError
from .fixedloci import BATTERY, FixedLoci
from .group import CapExceeded, FiniteMatrixGroup, GroupError, check_symplectic, close_generators, element_order
from .linalg import Mat
from .symplectic import (
    CheckReport,
    SymplecticData,
    SymplecticError,
    SymplecticStructure,
    appendix_c_suite,
    standard_form,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_VERIFY = 4

VERBS = ("compute", "verify", "molien", "cocycle", "all")
_MAX_EXAMPLES = 5


class InputError(ValueError):
    """Schema or scalar error in an input document."""

    def __init__(self, message: str, fieldname: str | None = None, line: int | None = None):
        self.field = fieldname
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if fieldname:
            where.append(f"field {fieldname}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


# ---------------------------------------------------------------------------
# input


def _line_of(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    pos = text.find(needle)
    return text.count("\n", 0, pos) + 1 if pos >= 0 else None


def _int_field(doc: dict, key: str, path: str, text: str, minimum: int | None = None) -> int:
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise InputError(f"expected an integer, got {json.dumps(val)}", path, _line_of(text, key))
    if minimum is not None and val < minimum:
        raise InputError(f"must be >= {minimum}, got {val}", path, _line_of(text, key))
    return val


def _matrix(raw: Any, d: int, order: int, path: str, text: str, key: str) -> Mat:
    line = _line_of(text, key)
    if not isinstance(raw, list) or len(raw) != d:
        raise InputError(f"expected {d} rows", path, line)
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != d:
            raise InputError(f"expected {d} entries", f"{path}[{i}]", line)
        out = []
        for j, x in enumerate(row):
            where = f"{path}[{i}][{j}]"
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise InputError(f"scalars must be strings, got {json.dumps(x)}", where, line)
            try:
                out.append(parse_scalar(str(x), order))
            except ScalarParseError as exc:
                raise InputError(f"bad scalar {x!r}: {exc}", where, line) from None
        rows.append(out)
    return Mat(rows, order)


_TOP_KEYS = {"name", "cyclotomic_order", "dimension", "generators", "symplectic_form", "options"}
_OPTION_MIN = {"cap": 1, "maxdeg": 0, "seed": None, "trials": 1}


def parse_input(source: str | Path) -> InputSpec:
    """Parse a JSON input document given as a path or as the document text."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read input: {exc}") from None
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} (column {exc.colno})", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise InputError("top level must be a JSON object", line=1)
    for key in doc:
        if key not in _TOP_KEYS:
            raise InputError("unknown field", key, _line_of(text, key))
    for key in ("name", "cyclotomic_order", "dimension", "generators"):
        if key not in doc:
            raise InputError("required field is missing", key)
    if not isinstance(doc["name"], str):
        raise InputError("expected a string", "name", _line_of(text, "name"))
    order = _int_field(doc, "cyclotomic_order", "cyclotomic_order", text, 1)
    d = _int_field(doc, "dimension", "dimension", text, 1)
    gens_raw = doc["generators"]
    if not isinstance(gens_raw, list) or not gens_raw:
        raise InputError("expected a nonempty list of matrices", "generators", _line_of(text, "generators"))
    gens = [_matrix(g, d, order, f"generators[{i}]", text, "generators") for i, g in enumerate(gens_raw)]

    form_raw = doc.get("symplectic_form")
    form: Mat | None
    if form_raw is None:
        form = None
    elif form_raw == "standard":
        if d % 2:
            raise InputError("standard form needs an even dimension", "symplectic_form", _line_of(text, "symplectic_form"))
        form = standard_form(d // 2, order)
    elif isinstance(form_raw, list):
        form = _matrix(form_raw, d, order, "symplectic_form", text, "symplectic_form")
    else:
        raise InputError('expected "standard", a matrix, or null', "symplectic_form", _line_of(text, "symplectic_form"))

    opts_raw = doc.get("options", {})
    if not isinstance(opts_raw, dict):
        raise InputError("expected an object", "options", _line_of(text, "options"))
    opts = {}
    for key, val in opts_raw.items():
        if key not in _OPTION_MIN:
            raise InputError("unknown option", f"options.{key}", _line_of(text, key))
        opts[key] = _int_field(opts_raw, key, f"options.{key}", text, _OPTION_MIN[key])
    return InputSpec(doc["name"], order, d, gens, form, **opts)


# ---------------------------------------------------------------------------
# report


@dataclass
class Report:
    data: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2, ensure_ascii=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        data = json.loads(text)
        code = EXIT_OK
        ver = data.get("verification")
        if ver is not None and not ver.get("passed", True):
            code = EXIT_VERIFY
        return cls(data, code)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "key", "exact", "approx"])
        for row in self.data.get("fixed_loci", []):
            w.writerow(["fixed_loci", row["representative"], row["codim"], row["size"]])
        for row in self.data.get("sa_constants", []):
            w.writerow(["sa_constants", f"{row['g']}*{row['h']}", row["value"], _approx_str(row["approx"])])
        for row in self.data.get("cocycle", []):
            w.writerow(["cocycle", f"{row['g']}*{row['h']}", row["value"], _approx_str(row["approx"])])
        for row in self.data.get("lambda", []):
            w.writerow(["lambda_square", row["element"], row["square"], repr(row["approx"])])
        for name, dims in sorted(self.data.get("dimensions", {}).items()):
            for deg, val in enumerate(dims):
                w.writerow([f"dims_{name}", deg, val, ""])
        mol = self.data.get("molien")
        if mol:
            for deg, coeffs in sorted(mol["series"].items(), key=lambda kv: int(kv[0])):
                w.writerow(["molien", deg, " ".join(map(str, coeffs)), ""])
        ver = self.data.get("verification")
        if ver:
            for chk in ver["checks"]:
                w.writerow(["verification", chk["name"], "pass" if chk["passed"] else "FAIL", chk["checked"]])
        return buf.getvalue()

    def to_text(self) -> str:
        d = self.data
        out = []
        grp = d["group"]
        out.append(f"{d['name']}: |G| = {grp['order']}, dim V = {grp['dimension']}, "
                   f"{grp['classes']} classes, cyclotomic order {grp['cyclotomic_order']}, "
                   f"{'symplectic' if grp['symplectic'] else 'not symplectic'}")
        if "fixed_loci" in d:
            out.append("")
            out.append("fixed loci (per class):")
            for row in d["fixed_loci"]:
                out.append(f"  {row['representative']:<16} size {row['size']:<4} order {row['order']:<3} codim {row['codim']}")
        if "sa_constants" in d:
            out.append("")
            out.append(f"SA constants c(g,h) on transverse-shared pairs ({len(d['sa_constants'])} nonzero):")
            for row in d["sa_constants"]:
                out.append(f"  c({row['g']}, {row['h']}) = {row['value']}")
        if "lambda" in d:
            out.append("")
            out.append("lambda(g)^2 = det(1-g | N_g):")
            for row in d["lambda"]:
                out.append(f"  {row['element']:<16} {row['square']:<12} ~ {row['approx']:.6g}")
        if "cocycle" in d:
            out.append("")
            out.append("cocycle a(g,h):")
            for row in d["cocycle"]:
                out.append(f"  a({row['g']}, {row['h']}) = {row['value']}  ~ {_approx_str(row['approx'])}")
        for name, dims in sorted(d.get("dimensions", {}).items()):
            out.append("")
            out.append(f"{name} dimensions by degree: {' '.join(map(str, dims))}")
        if "molien" in d:
            mol = d["molien"]
            out.append("")
            out.append(f"Molien series, coefficients of t^0..t^{mol['maxdeg']} by cohomological degree:")
            for deg, coeffs in sorted(mol["series"].items(), key=lambda kv: int(kv[0])):
                out.append(f"  deg {deg}: {' '.join(map(str, coeffs))}")
        if "verification" in d:
            ver = d["verification"]
            out.append("")
            out.append("verification:")
            for chk in ver["checks"]:
                status = "pass" if chk["passed"] else "FAIL"
                line = f"  [{status}] {chk['name']} ({chk['checked']} checked"
                if chk["failures"]:
                    line += f", {chk['failures']} failures, e.g. {chk['examples'][0]}"
                out.append(line + ")")
            for note in ver.get("notes", []):
                out.append(f"  [info] {note['name']}: fails on {note['split_pairs']} of {note['pairs']} pairs")
                for ex in note["examples"]:
                    out.append(f"         {ex}")
            out.append(f"overall: {'PASS' if ver['passed'] else 'FAIL'}")
        return "\n".join(out) + "\n"


def _approx(x: Cyclotomic) -> float | list[float]:
    z = x.embed()
    if x.is_real():
        return z.real
    return [z.real, z.imag]


def _approx_str(a) -> str:
    return repr(a) if isinstance(a, float) else f"{a[0]!r}{a[1]:+}i"


def element_label(group: FiniteMatrixGroup, gid: int) -> str:
    """Cycle notation when the element permutes coordinates (possibly cotangent-lifted), else g<id>."""
    m = group.matrix(gid)
    perm = None
    if m.rows % 2 == 0:
        k = m.rows // 2
        top = m.submatrix(range(k), range(k))
        if m == _block_diag(top, top):
            perm = _as_permutation(top)
    if perm is None:
        perm = _as_permutation(m)
    if perm is None:
        return f"g{gid}"
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        cycles.append("(" + ("".join if len(perm) < 10 else " ".join)(map(str, cyc)) + ")")
    return "".join(cycles) or "e"


def _as_permutation(m: Mat) -> list[int] | None:
    n = m.rows
    perm = [-1] * n
    for j in range(n):
        col = [m.data[i][j] for i in range(n)]
        ones = [i for i, x in enumerate(col) if x == 1]
        if len(ones) != 1 or any(x for i, x in enumerate(col) if i != ones[0]):
            return None
        perm[j] = ones[0]
    return perm if sorted(perm) == list(range(n)) else None


def _block_diag(a: Mat, b: Mat) -> Mat:
    za = Mat.zeros(a.rows, b.cols, a.order)
    zb = Mat.zeros(b.rows, a.cols, a.order)
    return a.hstack(za).vstack(zb.hstack(b))


def _check(rep: CheckReport) -> dict:
    return {
        "name": rep.name,
        "passed": rep.passed,
        "checked": rep.checked,
        "failures": len(rep.failures),
        "examples": [str(f) for f in rep.failures[:_MAX_EXAMPLES]],
    }


class Session:
    """All derived objects for one input, built lazily."""

    def __init__(self, spec: InputSpec, fault: str | None = None):
        self.spec = spec
        self.group = close_generators(spec.generators, cap=spec.cap)
        self.loci = FixedLoci(self.group)
        self.sa = DetAlgebra(self.loci)
        if fault == "sa":
            _corrupt_sa(self.sa)
        self.fiber = FiberAlgebra(self.sa)
        self.form: SymplecticStructure | None = None
        self.symp: SymplecticData | None = None
        if spec.symplectic_form is not None:
            form = spec.symplectic_form.lift(max(spec.symplectic_form.order, self.group.order_n))
            self.form = SymplecticStructure.from_form(form)
            if check_symplectic(self.group, self.form.J):
                self.symp = SymplecticData(self.sa, self.form)
        self.labels = [element_label(self.group, g) for g in range(len(self.group))]

    # tables ------------------------------------------------------------------

    def summary(self) -> dict:
        g = self.group
        return {
            "order": len(g),
            "dimension": g.dim,
            "cyclotomic_order": g.order_n,
            "classes": len(g.classes),
            "abelian": g.is_abelian(),
            "symplectic": self.symp is not None,
        }

    def fixed_loci_table(self) -> list[dict]:
        rows = []
        for cls in self.group.classes:
            rep = cls[0]
            rows.append({
                "representative": self.labels[rep],
                "id": rep,
                "size": len(cls),
                "order": element_order(self.group, rep),
                "codim": self.loci.codim(rep),
                "matrix": [[format_scalar(x) for x in r] for r in self.group.matrix(rep).data],
            })
        return rows

    def sa_table(self) -> list[dict]:
        n = len(self.group)
        rows = []
        for g in range(n):
            for h in range(n):
                c = self.sa.sa_constant(g, h)
                if c:
                    rows.append(self._pair_row(g, h, c))
        return rows

    def _pair_row(self, g: int, h: int, value: Cyclotomic) -> dict:
        gh = self.group.mult[g][h]
        return {"g": self.labels[g], "h": self.labels[h], "gh": self.labels[gh],
                "ids": [g, h, gh], "value": format_scalar(value), "approx": _approx(value)}

    def cocycle_table(self) -> list[dict]:
        return [self._pair_row(g, h, a) for (g, h), a in sorted(self.symp.cocycle_table().items())]

    def lambda_table(self) -> list[dict]:
        rows = []
        for cls in self.group.classes:
            g = cls[0]
            lam = self.symp.lam(g)
            rows.append({"element": self.labels[g], "id": g, "square": format_scalar(lam.square),
                         "approx": lam.approx})
        return rows

    def dimensions(self) -> dict:
        dims = {"invariant": self.fiber.invariant_dims().as_list()}
        if self.symp is not None:
            dims["orbifold"] = self.fiber.orbifold_dims(self.form.J).as_list()
        return dims

    def molien(self, maxdeg: int) -> dict:
        series = self.fiber.molien_bigraded(maxdeg)
        return {"maxdeg": maxdeg, "series": {str(k): v for k, v in series.series.items()}}

    # verification ------------------------------------------------------------

    def verify(self) -> tuple[list[dict], list[dict]]:
        battery, note = self._battery()
        checks = [
            battery,
            self._sa_associativity(),
            self._sa_equivariance(),
            self._product_equivalence(),
            self._invariant_dims(),
        ]
        if self.symp is not None:
            checks += [
                self.symp.verify_coboundary(),
                self._psi_pfaffian(),
                self._covariance(),
                self.symp.transparent_check(),
            ]
        checks.append(self._appendix_c())
        return [_check(c) for c in checks], [note]

    def _battery(self) -> tuple[CheckReport, dict]:
        rep = CheckReport("pair-condition battery")
        split = []
        n = len(self.group)
        for g in range(n):
            for h in range(n):
                rep.checked += 1
                pr = self.loci.dualrels_battery(g, h)
                vals = "".join("1" if pr.conditions[k] else "0" for k in BATTERY)
                if not pr.consistent:
                    rep.fail((self.labels[g], self.labels[h], vals))
                if not pr.all_equal:
                    split.append(f"({self.labels[g]}, {self.labels[h]}) {''.join(BATTERY)}={vals}")
                if not all(self.loci.codim_check(g, h)):
                    rep.fail(("codim-inequality", self.labels[g], self.labels[h]))
        note = {
            "name": "seven-way pair-condition equivalence",
            "pairs": n * n,
            "split_pairs": len(split),
            "examples": split[:_MAX_EXAMPLES],
        }
        return rep, note

    def _sa_associativity(self) -> CheckReport:
        rep = CheckReport("SA associativity")
        rep.checked = len(self.group) ** 3
        rep.failures = self.sa.associativity_failures()
        return rep

    def _sa_equivariance(self) -> CheckReport:
        rep = CheckReport("SA equivariance")
        n = len(self.group)
        rep.checked = 2 * n ** 3
        rep.failures = self.sa.equivariance_failures() + self.sa.epsilon_cocycle_failures()
        return rep

    def _product_equivalence(self) -> CheckReport:
        rep = CheckReport("product equivalence")
        basis = list(self.fiber.basis())
        for g, s in basis:
            for h, t in basis:
                rep.checked += 1
                a = self.fiber.multiply_basis(g, s, h, t)
                b = self.fiber.alternate_multiply_basis(g, s, h, t)
                if a[0] != b[0] or a[1] != b[1]:
                    rep.fail((g, s, h, t))
        return rep

    def _invariant_dims(self) -> CheckReport:
        rep = CheckReport("invariant dimensions")
        rep.checked = 2
        dims = self.fiber.invariant_dims()
        if self.fiber.invariant_trace_dims() != dims:
            rep.fail("rank and trace of the averaging projector disagree")
        try:
            mol = self.fiber.molien_bigraded(0)
            slice0 = {int(k): v[0] for k, v in mol.series.items() if v[0]}
            if slice0 != dims.dims:
                rep.fail(f"Molien t^0 slice {slice0} != {dims.dims}")
        except MolienError as exc:
            rep.fail(str(exc))
        return rep

    def _psi_pfaffian(self) -> CheckReport:
        rep = CheckReport("psi vs Pfaffian")
        for g in range(len(self.group)):
            rep.checked += 1
            if self.symp.psi_scalar(g) != self.symp.psi_pfaffian(g):
                rep.fail(self.labels[g])
        return rep

    def _covariance(self) -> CheckReport:
        rep = CheckReport("cocycle conjugation invariance")
        rep.checked = len(self.symp.cocycle_table()) * len(self.group)
        rep.failures = self.symp.cocycle_covariance_failures()
        return rep

    def _appendix_c(self) -> CheckReport:
        rep = CheckReport("complementary-subspace Pfaffian identities")
        for trial in appendix_c_suite(self.spec.seed, self.spec.trials):
            rep.checked += 1
            if not trial.passed:
                rep.fail(trial.seed)
        return rep


def _corrupt_sa(sa: DetAlgebra) -> None:
    """Test hook: double one nontrivial SA constant so that verification must fail."""
    grp = sa.group
    n = len(grp)
    for g in range(1, n):
        for h in range(1, n):
            c = sa.sa_constant(g, h)
            if c:
                sa._c[(g, h)] = c * 2
                return
    # no nontrivial pair: corrupt the unit instead
    sa._c[(0, 0)] = sa.sa_constant(0, 0) * 2


def run(verb: str, spec: InputSpec, fault: str | None = None) -> Report:
    """Run one verb. Raises CapExceeded / GroupError / SymplecticError on bad input."""
    if verb not in VERBS:
        raise ValueError(f"unknown verb {verb!r}")
    sess = Session(spec, fault)
    data: dict[str, Any] = {"name": spec.name, "verb": verb, "input": spec.to_document(), "group": sess.summary()}
    if verb in ("compute", "all"):
        data["fixed_loci"] = sess.fixed_loci_table()
        data["sa_constants"] = sess.sa_table()
        data["dimensions"] = sess.dimensions()
    if verb in ("cocycle", "compute", "all"):
        if sess.symp is not None:
            data["cocycle"] = sess.cocycle_table()
            data["lambda"] = sess.lambda_table()
        elif verb == "cocycle":
            raise SymplecticError("cocycle needs a symplectic form preserved by the group")
    if verb in ("molien", "all"):
        data["molien"] = sess.molien(spec.maxdeg)
    code = EXIT_OK
    if verb in ("verify", "all"):
        checks, notes = sess.verify()
        passed = all(c["passed"] for c in checks)
        data["verification"] = {"checks": checks, "notes": notes, "passed": passed}
        if not passed:
            code = EXIT_VERIFY
    return Report(data, code)


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbihh", description="Hochschild cohomology of linear quotient orbifolds.")
    p.add_argument("verb", choices=VERBS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="FILE", help="JSON input document")
    src.add_argument("--builtin", metavar="NAME", help="built-in example, e.g. sym_n:3")
    p.add_argument("--json", metavar="OUT", help="write the machine report as JSON ('-' for stdout)")
    p.add_argument("--csv", metavar="OUT", help="write tables as CSV ('-' for stdout)")
    p.add_argument("--maxdeg", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--inject-fault", choices=("sa",), help=argparse.SUPPRESS)
    return p


def _emit(target: str, text: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = parse_input(args.input) if args.input else builtin(args.builtin)
        for key in ("maxdeg", "seed", "trials", "cap"):
            val = getattr(args, key)
            if val is not None:
                if key != "seed" and val < (0 if key == "maxdeg" else 1):
                    raise InputError(f"--{key} out of range: {val}")
                setattr(spec, key, val)
        report = run(args.verb, spec, args.inject_fault)
    except (InputError, UnknownBuiltin) as exc:
        print(f"orbihh: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"orbihh: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (GroupError, SymplecticError) as exc:
        print(f"orbihh: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.json:
        _emit(args.json, report.to_json())
    if args.csv:
        _emit(args.csv, report.to_csv())
    if args.json != "-" and args.csv != "-":
        sys.stdout.write(report.to_text())
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
