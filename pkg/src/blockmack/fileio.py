"""Line-oriented text formats and JSON certificate files.

Every standalone file starts with a "format 1" line; matrix blocks embedded
inside other files use the bare gfmat layout ("p rows cols" then rows of
residues).  JSON is reserved for certificates, manifests and reports, with
matrices embedded as gfmat text strings for bit-exactness.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Optional, TextIO

import numpy as np

from . import chainkit, fdalg, fdmod, mackey, morita, permgrp
from .chainkit import (BoundedComplex, ChainMap, HomotopyWitness,
                       RickardCertificate)
from .fdalg import EndoAlgebraData, FDAlgebra, Idempotent
from .fdmod import Bimodule, ModRep
from .gfmat import FFMatrix, SpanSolver

FORMAT_LINE = "format 1"


class FileFormatError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


# ---------------------------------------------------------------------
# Matrix blocks
# ---------------------------------------------------------------------

def matrix_to_text(M: FFMatrix) -> str:
    lines = [f"{M.p} {M.rows} {M.cols}"]
    for r in M.a:
        lines.append(" ".join(str(int(x)) for x in r))
    return "\n".join(lines)


def matrix_from_text(text: str) -> FFMatrix:
    lines = [ln for ln in text.strip().splitlines()]
    p, rows, cols = (int(t) for t in lines[0].split())
    data = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        vals = [int(t) for t in lines[1 + i].split()]
        if len(vals) != cols:
            raise ValueError(f"matrix row {i} has {len(vals)} entries, "
                             f"expected {cols}")
        data[i] = vals
    return FFMatrix(data, p)


def _read_matrix_block(lines: list[str], pos: int, path: str) -> tuple[FFMatrix, int]:
    head = lines[pos].split()
    if len(head) != 3:
        raise FileFormatError(path, pos + 1, "expected matrix header 'p rows cols'")
    p, rows, cols = (int(t) for t in head)
    data = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        vals = [int(t) for t in lines[pos + 1 + i].split()]
        if len(vals) != cols:
            raise FileFormatError(path, pos + 2 + i,
                                  f"expected {cols} entries, got {len(vals)}")
        data[i] = vals
    return FFMatrix(data, p), pos + 1 + rows


def _check_format_line(lines: list[str], path: str):
    if not lines or lines[0].strip() != FORMAT_LINE:
        raise FileFormatError(path, 1, f"missing '{FORMAT_LINE}' header")


# ---------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------

def write_group(G: permgrp.PermGroup, path: str):
    lines = [FORMAT_LINE, f"degree {G.degree}"]
    for g in G.generators:
        lines.append("gen " + " ".join(str(i + 1) for i in g))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_group(path: str) -> permgrp.PermGroup:
    with open(path) as fh:
        lines = fh.read().splitlines()
    _check_format_line(lines, path)
    if len(lines) < 2 or not lines[1].startswith("degree "):
        raise FileFormatError(path, 2, "expected 'degree n'")
    try:
        degree = int(lines[1].split()[1])
    except (IndexError, ValueError):
        raise FileFormatError(path, 2, "bad degree line")
    gens = []
    for no, ln in enumerate(lines[2:], start=3):
        if not ln.strip():
            continue
        parts = ln.split()
        if parts[0] != "gen":
            raise FileFormatError(path, no, f"expected 'gen ...', got {ln!r}")
        try:
            images = [int(t) - 1 for t in parts[1:]]
        except ValueError:
            raise FileFormatError(path, no, "generator images must be integers")
        if len(images) != degree:
            raise FileFormatError(path, no,
                                  f"generator has {len(images)} points, "
                                  f"expected {degree}")
        gens.append(images)
    try:
        return permgrp.close_group(degree, gens)
    except ValueError as exc:
        raise FileFormatError(path, 3, str(exc))


# ---------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------

def write_algebra(A: FDAlgebra, path: str):
    lines = [FORMAT_LINE, f"{A.p} {A.dim}"]
    idx = np.argwhere(A.structure != 0)
    for i, j, k in idx:
        lines.append(f"{i} {j} {k} {int(A.structure[i, j, k])}")
    lines.append("unit " + " ".join(str(int(x)) for x in A.unit))
    if A.sym_form is not None:
        lines.append("symform " + " ".join(str(int(x)) for x in A.sym_form))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_algebra(path: str, check: bool = True) -> FDAlgebra:
    with open(path) as fh:
        lines = fh.read().splitlines()
    _check_format_line(lines, path)
    try:
        p, dim = (int(t) for t in lines[1].split())
    except (IndexError, ValueError):
        raise FileFormatError(path, 2, "expected 'p dim' header")
    structure = np.zeros((dim, dim, dim), dtype=np.int64)
    unit = None
    sym = None
    for no, ln in enumerate(lines[2:], start=3):
        if not ln.strip():
            continue
        parts = ln.split()
        if parts[0] == "unit":
            unit = [int(t) for t in parts[1:]]
        elif parts[0] == "symform":
            sym = [int(t) for t in parts[1:]]
        else:
            try:
                i, j, k, val = (int(t) for t in parts)
            except ValueError:
                raise FileFormatError(path, no, f"bad structure line {ln!r}")
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise FileFormatError(path, no, "structure index out of range")
            structure[i, j, k] = val % p
    if unit is None or len(unit) != dim:
        raise FileFormatError(path, len(lines), "missing or malformed unit line")
    if sym is not None and len(sym) != dim:
        raise FileFormatError(path, len(lines), "malformed symform line")
    return FDAlgebra(p, structure, unit, sym, check=check)


# ---------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------

def write_module(U: ModRep, path: str, algebra_file: str):
    lines = [FORMAT_LINE, f"algebra {algebra_file} dim {U.dim}"]
    for i in range(U.algebra.dim):
        lines.append(matrix_to_text(U.act_basis(i)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_module(path: str, algebra: Optional[FDAlgebra] = None,
                check: bool = True) -> ModRep:
    with open(path) as fh:
        lines = fh.read().splitlines()
    _check_format_line(lines, path)
    parts = lines[1].split()
    if len(parts) != 4 or parts[0] != "algebra" or parts[2] != "dim":
        raise FileFormatError(path, 2, "expected 'algebra <file> dim d'")
    if algebra is None:
        alg_path = os.path.join(os.path.dirname(path) or ".", parts[1])
        algebra = read_algebra(alg_path, check=check)
    n = int(parts[3])
    acts = np.zeros((algebra.dim, n, n), dtype=np.int64)
    pos = 2
    for i in range(algebra.dim):
        m, pos = _read_matrix_block(lines, pos, path)
        if m.shape != (n, n):
            raise FileFormatError(path, pos, f"action block {i} has shape "
                                             f"{m.shape}, expected {(n, n)}")
        acts[i] = m.a
    return ModRep(algebra, acts, check=check)


# ---------------------------------------------------------------------
# Complexes (one-sided)
# ---------------------------------------------------------------------

def write_complex(C: BoundedComplex, path: str, module_files: dict[int, str]):
    """module_files: degree -> module file name (written separately)."""
    lines = [FORMAT_LINE, f"{C.lo} {C.hi}"]
    for n in range(C.lo, C.hi + 1):
        lines.append(f"degree {n} module {module_files[n]}")
        lines.append(matrix_to_text(C.differential(n)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_complex(path: str, algebra: FDAlgebra,
                 check: bool = True) -> BoundedComplex:
    with open(path) as fh:
        lines = fh.read().splitlines()
    _check_format_line(lines, path)
    lo, hi = (int(t) for t in lines[1].split())
    comps = {}
    diffs = {}
    pos = 2
    base = os.path.dirname(path) or "."
    for n in range(lo, hi + 1):
        parts = lines[pos].split()
        if parts[0] != "degree" or int(parts[1]) != n or parts[2] != "module":
            raise FileFormatError(path, pos + 1, f"expected degree {n} line")
        comps[n] = read_module(os.path.join(base, parts[3]), algebra,
                               check=check)
        pos += 1
        d, pos = _read_matrix_block(lines, pos, path)
        if n > lo:
            diffs[n] = d
    return BoundedComplex(lo, hi, comps, diffs, check=check)


# ---------------------------------------------------------------------
# Bimodules and certificates (JSON)
# ---------------------------------------------------------------------

def bimodule_to_json(M: Bimodule) -> dict:
    return {
        "dim": M.dim,
        "left_acts": [matrix_to_text(M.left_act_basis(i))
                      for i in range(M.left_algebra.dim)],
        "right_acts": [matrix_to_text(M.right_act_basis(j))
                       for j in range(M.right_algebra.dim)],
    }


def bimodule_from_json(obj: dict, left: FDAlgebra, right: FDAlgebra,
                       check: bool = True) -> Bimodule:
    n = obj["dim"]
    lacts = np.zeros((left.dim, n, n), dtype=np.int64)
    racts = np.zeros((right.dim, n, n), dtype=np.int64)
    for i, text in enumerate(obj["left_acts"]):
        lacts[i] = matrix_from_text(text).a
    for j, text in enumerate(obj["right_acts"]):
        racts[j] = matrix_from_text(text).a
    return Bimodule(left, right, lacts, racts, check=check)


def write_morita_certificate(cert: morita.MoritaCertificate, path: str,
                             e_file: str, f_file: str):
    obj = {
        "format": 1,
        "kind": "morita",
        "E_file": e_file,
        "F_file": f_file,
        "M": bimodule_to_json(cert.M),
        "N": bimodule_to_json(cert.N),
        "witness_EM": matrix_to_text(cert.witness_EM),
        "witness_FN": matrix_to_text(cert.witness_FN),
    }
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_morita_certificate(path: str,
                            check: bool = True) -> morita.MoritaCertificate:
    with open(path) as fh:
        obj = json.load(fh)
    if obj.get("format") != 1 or obj.get("kind") != "morita":
        raise FileFormatError(path, 1, "not a format-1 morita certificate")
    base = os.path.dirname(path) or "."
    E = read_algebra(os.path.join(base, obj["E_file"]), check=check)
    F = read_algebra(os.path.join(base, obj["F_file"]), check=check)
    M = bimodule_from_json(obj["M"], E, F, check=check)
    N = bimodule_from_json(obj["N"], F, E, check=check)
    return morita.MoritaCertificate(
        E=E, F=F, M=M, N=N,
        witness_EM=matrix_from_text(obj["witness_EM"]),
        witness_FN=matrix_from_text(obj["witness_FN"]))


def complex_to_json(C: BoundedComplex) -> dict:
    comps = []
    for n in range(C.lo, C.hi + 1):
        comps.append({"degree": n,
                      "component": bimodule_to_json(C.component(n))})
    diffs = {str(n): matrix_to_text(C.differential(n))
             for n in range(C.lo + 1, C.hi + 1)}
    return {"lo": C.lo, "hi": C.hi, "components": comps, "diffs": diffs}


def complex_from_json(obj: dict, left: FDAlgebra, right: FDAlgebra,
                      check: bool = True) -> BoundedComplex:
    comps = {}
    for entry in obj["components"]:
        comps[entry["degree"]] = bimodule_from_json(entry["component"],
                                                    left, right, check=check)
    diffs = {int(n): matrix_from_text(t) for n, t in obj["diffs"].items()}
    return BoundedComplex(obj["lo"], obj["hi"], comps, diffs, check=check)


def _chain_map_to_json(f: ChainMap) -> dict:
    return {str(n): matrix_to_text(m) for n, m in f.comps.items()}


def _homotopy_to_json(w: HomotopyWitness) -> dict:
    return {
        "fwd": _chain_map_to_json(w.fwd),
        "bwd": _chain_map_to_json(w.bwd),
        "h_src": {str(n): matrix_to_text(m) for n, m in w.h_src.items()},
        "h_tgt": {str(n): matrix_to_text(m) for n, m in w.h_tgt.items()},
    }


def write_rickard_certificate(cert: RickardCertificate, path: str,
                              e_file: str, f_file: str):
    obj = {
        "format": 1,
        "kind": "rickard",
        "E_file": e_file,
        "F_file": f_file,
        "M": complex_to_json(cert.M),
        "N": complex_to_json(cert.N),
        "htpy_E": _homotopy_to_json(cert.htpy_E),
        "htpy_F": _homotopy_to_json(cert.htpy_F),
    }
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_rickard_certificate(path: str,
                             check: bool = True) -> RickardCertificate:
    from .chainkit import single_complex, tensor_complexes
    from . import fdmod as _fdmod
    with open(path) as fh:
        obj = json.load(fh)
    if obj.get("format") != 1 or obj.get("kind") != "rickard":
        raise FileFormatError(path, 1, "not a format-1 rickard certificate")
    base = os.path.dirname(path) or "."
    E = read_algebra(os.path.join(base, obj["E_file"]), check=check)
    F = read_algebra(os.path.join(base, obj["F_file"]), check=check)
    M = complex_from_json(obj["M"], E, F, check=check)
    N = complex_from_json(obj["N"], F, E, check=check)
    TE = tensor_complexes(M, N, F).complex
    TF = tensor_complexes(N, M, E).complex
    tgtE = single_complex(_fdmod.regular_bimodule(E), 0)
    tgtF = single_complex(_fdmod.regular_bimodule(F), 0)

    def chain_map(obj_part, src, dst):
        return ChainMap(src, dst, {int(n): matrix_from_text(t)
                                   for n, t in obj_part.items()})

    def homotopy(obj_part, src, dst):
        return HomotopyWitness(
            fwd=chain_map(obj_part["fwd"], src, dst),
            bwd=chain_map(obj_part["bwd"], dst, src),
            h_src={int(n): matrix_from_text(t)
                   for n, t in obj_part["h_src"].items()},
            h_tgt={int(n): matrix_from_text(t)
                   for n, t in obj_part["h_tgt"].items()})

    return RickardCertificate(E=E, F=F, M=M, N=N,
                              htpy_E=homotopy(obj["htpy_E"], TE, tgtE),
                              htpy_F=homotopy(obj["htpy_F"], TF, tgtF))


# ---------------------------------------------------------------------
# Yoshida manifests
# ---------------------------------------------------------------------

def write_yoshida(Y: mackey.YoshidaData, outdir: str):
    os.makedirs(outdir, exist_ok=True)
    write_algebra(Y.E, os.path.join(outdir, "E.alg"))
    write_algebra(Y.blk.algebra, os.path.join(outdir, "A.alg"))
    write_module(Y.X, os.path.join(outdir, "X.mod"), "A.alg")
    obj = {
        "format": 1,
        "kind": "yoshida",
        "p": Y.p,
        "group_order": Y.group.order,
        "E_file": "E.alg",
        "A_file": "A.alg",
        "X_file": "X.mod",
        "block_idempotent": matrix_to_text(
            FFMatrix(Y.block.coords.reshape(1, -1), Y.p)),
        "basis_mats": [matrix_to_text(m) for m in Y.endo.basis_mats],
        "classes": [{
            "dimension": t.dimension,
            "multiplicity": t.multiplicity,
            "projective": t.projective,
            "injective_E_side": t.injective_E_side,
            "idempotent": matrix_to_text(
                FFMatrix(t.idem.coords.reshape(1, -1), Y.p)),
        } for t in Y.summand_tags],
    }
    with open(os.path.join(outdir, "yoshida.json"), "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_yoshida(outdir: str, check: bool = True) -> mackey.YoshidaData:
    """Reload a Yoshida manifest; group-level fields stay unset."""
    with open(os.path.join(outdir, "yoshida.json")) as fh:
        obj = json.load(fh)
    if obj.get("format") != 1 or obj.get("kind") != "yoshida":
        raise FileFormatError(outdir, 1, "not a format-1 yoshida manifest")
    E = read_algebra(os.path.join(outdir, obj["E_file"]), check=check)
    A = read_algebra(os.path.join(outdir, obj["A_file"]), check=check)
    X = read_module(os.path.join(outdir, obj["X_file"]), A, check=check)
    mats = [matrix_from_text(t) for t in obj["basis_mats"]]
    stack = FFMatrix(np.array([m.a.reshape(-1) for m in mats],
                              dtype=np.int64), E.p, _raw=True)
    endo = EndoAlgebraData(base=A, summands=[], E=E, proj_idems=[], X=X,
                           basis_mats=mats, offsets=[],
                           solver=SpanSolver(stack))
    tags = []
    for entry in obj["classes"]:
        idem = Idempotent(E, matrix_from_text(entry["idempotent"]).a[0])
        tags.append(mackey.SummandClassTag(
            dimension=entry["dimension"],
            multiplicity=entry["multiplicity"],
            projective=entry["projective"],
            injective_E_side=entry["injective_E_side"],
            idem=idem,
            module=None))
    Y = mackey.YoshidaData.__new__(mackey.YoshidaData)
    Y.group = None
    Y.p = obj["p"]
    Y.kG = None
    Y.block = None
    Y.blk = _corner_like(A)
    Y.class_list = None
    Y.q_modules = []
    Y.endo = endo
    Y.X = X
    Y.decomposition = None
    Y.summand_tags = tags
    for t in tags:
        t.module = Y.module_of_idempotent(t.idem)
    return Y


def _corner_like(A: FDAlgebra):
    """Wrap a block algebra loaded from file as its own trivial corner."""
    from .fdalg import CornerAlgebra
    rows = FFMatrix.identity(A.dim, A.p)
    e = Idempotent(A, A.unit)
    return CornerAlgebra(parent=A, e=e, algebra=A, rows=rows,
                         solver=SpanSolver(rows))


def sha256_of(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()
