"""Command-line interface: reproducible pipelines over the file formats.

Exit codes: 0 = all verdicts pass, 1 = a verdict failed, 2 = input error.
Every randomized routine takes the run seed; reports are byte-identical
for identical (inputs, seed, version).
"""

from __future__ import annotations

import os
import sys
import time

import click

from . import (chainkit, condense, derived, fdalg, fileio, mackey, morita,
               permgrp, reporting)
from .fileio import FileFormatError
from .gfmat import check_prime


class VerdictFailure(Exception):
    pass


def _emit(report: reporting.Report, out: str | None, fmt: str,
          default_name: str):
    text = report.render(fmt)
    click.echo(text, nl=False)
    if out:
        if os.path.isdir(out) or out.endswith(os.sep):
            os.makedirs(out, exist_ok=True)
            path = os.path.join(out, default_name)
        else:
            os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
            path = out
        with open(path, "w") as fh:
            fh.write(text)
    if not report.ok:
        raise VerdictFailure()


def _run(func):
    try:
        func()
    except VerdictFailure:
        sys.exit(1)
    except (FileFormatError, FileNotFoundError, ValueError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(2)
    sys.exit(0)


@click.group()
def main():
    """Exact workbench for block algebras and equivalence certificates."""


common = [
    click.option("--seed", type=int, default=0, show_default=True,
                 help="seed for all randomized routines"),
    click.option("--out", type=click.Path(), default=None,
                 help="write the report (and files) here"),
    click.option("--format", "fmt", type=click.Choice(["text", "json"]),
                 default="text", show_default=True),
    click.option("--verbosity", type=int, default=1, show_default=True),
]


def with_common(cmd):
    for opt in reversed(common):
        cmd = opt(cmd)
    return cmd


@main.command()
@click.argument("group_file", type=click.Path(exists=True))
@click.option("--p", type=int, required=True, help="prime modulus")
@click.option("--block", "block_index", type=int, default=0,
              show_default=True, help="index into the canonical block list")
@click.option("--figures", is_flag=True, help="render PNG figures")
@with_common
def yoshida(group_file, p, block_index, figures, seed, out, fmt, verbosity):
    """Build the Yoshida algebra of a block and classify its summands."""
    def run():
        t0 = time.time()
        check_prime(p)
        G = fileio.read_group(group_file)
        kG = fdalg.group_algebra(G, p)
        blocks = fdalg.central_primitive_idempotents(kG, seed)
        if not 0 <= block_index < len(blocks):
            raise ValueError(f"block index {block_index} out of range "
                             f"(algebra has {len(blocks)} blocks)")
        b = blocks[block_index]
        Y = mackey.yoshida_algebra(G, p, b, seed=seed, kG=kG)
        verdicts = mackey.classify_idempotents(Y, seed)
        report = reporting.Report(
            command="yoshida",
            params=[("p", str(p)), ("seed", str(seed)),
                    ("block", str(block_index))],
            inputs=[("group", group_file, fileio.sha256_of(group_file))],
            verbosity=verbosity)
        report.add("block", [
            ("|G|", G.order), ("blocks", len(blocks)),
            ("block dim", Y.blk.dim), ("defect order",
                                       len(permgrp.sylow_subgroup(G, p))),
            ("subgroup classes", len(Y.class_list.reps)),
        ])
        report.add("yoshida", [
            ("dim X", Y.X.dim), ("dim E", Y.E.dim),
            ("summand classes", len(Y.summand_tags)),
            ("projective classes",
             sum(t.projective for t in Y.summand_tags)),
        ])
        for i, (t, v) in enumerate(zip(Y.summand_tags, verdicts)):
            report.add(f"class {i}", [
                ("dim", t.dimension), ("multiplicity", t.multiplicity),
                ("projective", t.projective),
                ("E-injective left", v.left_injective),
                ("E-injective right", v.right_injective),
            ])
        report.verdict("source_classification_consistent",
                       all(v.consistent for v in verdicts))
        report.timings.append(("total", time.time() - t0))
        if out:
            os.makedirs(out, exist_ok=True)
            fileio.write_yoshida(Y, out)
            if figures:
                reporting.yoshida_figure(Y.summand_tags, Y.E.dim,
                                         os.path.join(out, "yoshida.png"))
        _emit(report, out, fmt, "report." + ("json" if fmt == "json" else "txt"))
    _run(run)


@main.command()
@click.argument("cert_file", type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(["morita", "rickard"]),
              required=True)
@with_common
def certify(cert_file, kind, seed, out, fmt, verbosity):
    """Verify a Morita or Rickard certificate file."""
    def run():
        t0 = time.time()
        report = reporting.Report(
            command="certify",
            params=[("kind", kind), ("seed", str(seed))],
            inputs=[("certificate", cert_file, fileio.sha256_of(cert_file))],
            verbosity=verbosity)
        if kind == "morita":
            cert = fileio.read_morita_certificate(cert_file)
            verdict = morita.verify_morita(cert, seed)
            report.add("certificate", [
                ("dim E", cert.E.dim), ("dim F", cert.F.dim),
                ("dim M", cert.M.dim), ("dim N", cert.N.dim)])
        else:
            cert = fileio.read_rickard_certificate(cert_file)
            verdict = chainkit.verify_rickard(cert, seed)
            report.add("certificate", [
                ("dim E", cert.E.dim), ("dim F", cert.F.dim),
                ("M degrees", f"[{cert.M.lo},{cert.M.hi}]"),
                ("N degrees", f"[{cert.N.lo},{cert.N.hi}]")])
        for c in verdict.checks:
            if not c.ok:
                report.add("failed axiom", [(c.axiom, c.detail or "failed")])
        report.verdict("certificate_valid", verdict.ok)
        report.timings.append(("total", time.time() - t0))
        _emit(report, out, fmt, "report." + ("json" if fmt == "json" else "txt"))
    _run(run)


@main.command()
@click.argument("cert_file", type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(["morita", "rickard"]),
              required=True)
@click.option("--left", "left_dir", type=click.Path(exists=True),
              required=True, help="yoshida manifest directory, source side")
@click.option("--right", "right_dir", type=click.Path(exists=True),
              required=True, help="yoshida manifest directory, target side")
@click.option("--figures", is_flag=True)
@with_common
def transport(cert_file, kind, left_dir, right_dir, figures, seed, out, fmt,
              verbosity):
    """Transport a certificate to the proj-inj corners of two Yoshida data."""
    def run():
        t0 = time.time()
        YL = fileio.read_yoshida(left_dir)
        YR = fileio.read_yoshida(right_dir)
        report = reporting.Report(
            command="transport",
            params=[("kind", kind), ("seed", str(seed))],
            inputs=[("certificate", cert_file, fileio.sha256_of(cert_file)),
                    ("left", os.path.join(left_dir, "yoshida.json"),
                     fileio.sha256_of(os.path.join(left_dir, "yoshida.json"))),
                    ("right", os.path.join(right_dir, "yoshida.json"),
                     fileio.sha256_of(os.path.join(right_dir, "yoshida.json")))],
            verbosity=verbosity)
        ctx_e = condense.proj_inj_corner(YL, seed)
        ctx_f = condense.proj_inj_corner(YR, seed)
        report.add("corners", [("dim eEe", ctx_e.dim), ("dim fFf", ctx_f.dim)])
        if kind == "morita":
            cert = fileio.read_morita_certificate(cert_file)
            if cert.E.dim != YL.E.dim or cert.F.dim != YR.E.dim:
                raise ValueError("certificate algebras do not match the "
                                 "yoshida manifests")
            cert = morita.MoritaCertificate(
                E=YL.E, F=YR.E,
                M=_rebind_bimodule(cert.M, YL.E, YR.E),
                N=_rebind_bimodule(cert.N, YR.E, YL.E),
                witness_EM=cert.witness_EM, witness_FN=cert.witness_FN)
            pre = morita.verify_morita(cert, seed)
            report.verdict("input_certificate_valid", pre.ok)
            if pre.ok:
                rep = morita.transport_morita(cert, ctx_e, ctx_f, seed)
                report.verdict("transported_certificate_valid",
                               rep.verdict.ok)
                iso_e = condense.verify_corner_is_Aop(ctx_e, YL, seed=seed)
                iso_f = condense.verify_corner_is_Aop(ctx_f, YR, seed=seed)
                matches = morita.check_add_correspondence(
                    rep, YL, YR, iso_e, iso_f, seed)
                report.add("add correspondence",
                           [(f"class {i}", f"-> class {j}")
                            for i, j in matches])
                report.verdict("add_correspondence_bijective",
                               len(matches) == len(YL.summand_tags))
                invs = morita.morita_invariants(ctx_e.eEe, ctx_f.eEe, seed)
                report.add("corner invariants", [
                    ("eEe (simples, center, |cartan|)", invs[0].as_tuple()),
                    ("fFf (simples, center, |cartan|)", invs[1].as_tuple())])
                report.verdict("invariants_equal",
                               invs[0].as_tuple() == invs[1].as_tuple())
                if out:
                    os.makedirs(out, exist_ok=True)
                    fileio.write_algebra(rep.output.E,
                                         os.path.join(out, "eEe.alg"))
                    fileio.write_algebra(rep.output.F,
                                         os.path.join(out, "fFf.alg"))
                    fileio.write_morita_certificate(
                        rep.output, os.path.join(out, "corner_cert.json"),
                        "eEe.alg", "fFf.alg")
                    if figures:
                        reporting.transport_figure(
                            matches, len(YL.summand_tags),
                            len(YR.summand_tags),
                            os.path.join(out, "transport.png"))
        else:
            cert = fileio.read_rickard_certificate(cert_file)
            if cert.E.dim != YL.E.dim or cert.F.dim != YR.E.dim:
                raise ValueError("certificate algebras do not match the "
                                 "yoshida manifests")
            cert = _rebind_rickard(cert, YL.E, YR.E)
            pre = chainkit.verify_rickard(cert, seed)
            report.verdict("input_certificate_valid", pre.ok)
            if pre.ok:
                dc = derived.transport_derived(cert, ctx_e, ctx_f, seed)
                report.add("derived certificate", [
                    ("eMf degrees", f"[{dc.eMf.lo},{dc.eMf.hi}]"),
                    ("fNe degrees", f"[{dc.fNe.lo},{dc.fNe.hi}]"),
                    ("homology dims E-side", dc.qis_E.homology_dims),
                    ("homology dims F-side", dc.qis_F.homology_dims),
                    ("invariants eEe", dc.invariants_table[0].as_tuple()),
                    ("invariants fFf", dc.invariants_table[1].as_tuple())])
                for msg in dc.diagnostics:
                    report.add("diagnostic", [("note", msg)])
                report.verdict("derived_certificate_verified", dc.verified)
                sp = derived.split_corner_complex(cert.N, ctx_e, ctx_f, seed)
                report.verdict("corner_components_proj_inj",
                               not sp.violations)
        report.timings.append(("total", time.time() - t0))
        _emit(report, out, fmt, "report." + ("json" if fmt == "json" else "txt"))
    _run(run)


def _rebind_bimodule(M, left, right):
    from .fdmod import Bimodule
    return Bimodule(left, right, M.left_acts, M.right_acts, check=False)


def _rebind_rickard(cert, E, F):
    from .chainkit import BoundedComplex, ChainMap, HomotopyWitness, \
        RickardCertificate, single_complex, tensor_complexes
    from . import fdmod

    def rebind_complex(C, l, r):
        comps = {n: _rebind_bimodule(C.component(n), l, r)
                 for n in range(C.lo, C.hi + 1)}
        return BoundedComplex(C.lo, C.hi, comps, dict(C.diffs), check=False)

    M = rebind_complex(cert.M, E, F)
    N = rebind_complex(cert.N, F, E)
    TE = tensor_complexes(M, N, F).complex
    TF = tensor_complexes(N, M, E).complex
    tgtE = single_complex(fdmod.regular_bimodule(E), 0)
    tgtF = single_complex(fdmod.regular_bimodule(F), 0)
    hE = HomotopyWitness(fwd=ChainMap(TE, tgtE, cert.htpy_E.fwd.comps),
                         bwd=ChainMap(tgtE, TE, cert.htpy_E.bwd.comps),
                         h_src=cert.htpy_E.h_src, h_tgt=cert.htpy_E.h_tgt)
    hF = HomotopyWitness(fwd=ChainMap(TF, tgtF, cert.htpy_F.fwd.comps),
                         bwd=ChainMap(tgtF, TF, cert.htpy_F.bwd.comps),
                         h_src=cert.htpy_F.h_src, h_tgt=cert.htpy_F.h_tgt)
    return RickardCertificate(E=E, F=F, M=M, N=N, htpy_E=hE, htpy_F=hF)


@main.command()
@click.argument("group_file", type=click.Path(exists=True))
@click.option("--p", type=int, required=True)
@click.option("--figures", is_flag=True)
@with_common
def nilprobe(group_file, p, figures, seed, out, fmt, verbosity):
    """Necessary-condition probe for nilpotency of the principal block."""
    def run():
        t0 = time.time()
        check_prime(p)
        G = fileio.read_group(group_file)
        r = derived.nilpotent_probe(G, p, seed)
        report = reporting.Report(
            command="nilprobe",
            params=[("p", str(p)), ("seed", str(seed))],
            inputs=[("group", group_file, fileio.sha256_of(group_file))],
            verbosity=verbosity)
        report.add("probe", [
            ("|G|", r.group_order), ("defect order", r.defect_order),
            ("block dim", r.block_dim), ("basic dim", r.basic_dim),
            ("basic local", r.basic_local),
            ("basic commutative", r.basic_commutative),
            ("radical series", r.radical_series),
            ("k[defect] series", r.kp_radical_series),
            ("yoshida invariants", r.yoshida_invariants.as_tuple()),
            ("defect yoshida invariants",
             r.sylow_yoshida_invariants.as_tuple()),
        ])
        for msg in r.diagnostics:
            report.add("counter-diagnostic", [("note", msg)])
        report.add("conclusion", [
            ("verdict", "consistent with nilpotency" if r.consistent
             else "NOT consistent with nilpotency")])
        report.verdict("probe_completed", True)
        report.timings.append(("total", time.time() - t0))
        if out and figures:
            os.makedirs(out, exist_ok=True)
            reporting.nilprobe_figure(r, os.path.join(out, "nilprobe.png"))
        _emit(report, out, fmt, "report." + ("json" if fmt == "json" else "txt"))
    _run(run)


if __name__ == "__main__":
    main()
