import numpy as np
import pytest

from blockmack import chainkit, condense, derived, fdalg, morita, permgrp


@pytest.fixture(scope="module")
def rc_identity(Y_s3):
    return derived.identity_rickard_certificate(Y_s3.E)


def test_split_identity(rc_identity, corner_s3):
    sp = derived.split_corner_complex(rc_identity.N, corner_s3, corner_s3,
                                      seed=1)
    assert sp.N1.total_dim == 0
    assert sp.N0.component(0).dim == 8   # Ee for the S3 fixture
    assert not sp.violations


def test_split_shifted(rc_identity, corner_s3):
    rc = derived.shift_certificate(rc_identity, -2, seed=1)
    sp = derived.split_corner_complex(rc.N, corner_s3, corner_s3, seed=1)
    assert not sp.violations
    nonzero = [n for n in range(sp.N0.lo, sp.N0.hi + 1)
               if sp.N0.component(n).dim]
    assert nonzero == [2]   # N shifted by +2


def test_split_padded_absorbs_cones(rc_identity, Y_s3, corner_s3):
    # padding M leaves N untouched; pad N through the F-side instead by
    # transporting the padded certificate and checking the split of N
    padded = derived.pad_certificate_with_cone(rc_identity, degree=0, seed=1)
    sp = derived.split_corner_complex(padded.N, corner_s3, corner_s3, seed=1)
    assert not sp.violations
    # now pad a certificate whose N has an explicit cone summand
    reg = padded.N.component(0)
    pad = chainkit.cone(chainkit.identity_chain_map(
        chainkit.single_complex(reg, 0)), check=False)
    N2 = chainkit.direct_sum_complexes([rc_identity.N, pad])
    M2 = rc_identity.M
    cert2 = derived.make_rickard_certificate(Y_s3.E, Y_s3.E, M2, N2, seed=1)
    assert chainkit.verify_rickard(cert2, seed=1).ok
    sp2 = derived.split_corner_complex(cert2.N, corner_s3, corner_s3, seed=1)
    assert not sp2.violations
    # the contractible part absorbs exactly the padding's corner image
    pad_corner = derived.condense_complex(pad, corner_s3, None)
    assert sp2.N1.total_dim == pad_corner.total_dim


def test_transport_identity(rc_identity, corner_s3, Y_s3):
    dc = derived.transport_derived(rc_identity, corner_s3, corner_s3, seed=1)
    assert dc.verified and not dc.diagnostics
    assert dc.invariants_table[0].as_tuple() == \
        dc.invariants_table[1].as_tuple()
    # degree-0 agreement with the Morita transport
    mrep = morita.transport_morita(morita.identity_certificate(Y_s3.E),
                                   corner_s3, corner_s3, seed=1)
    assert dc.eMf.component(0).dim == mrep.output.M.dim
    assert dc.fNe.component(0).dim == mrep.output.N.dim
    # the comparison map in degree 0 matches the corner witness up to the
    # canonical identification: both are bijections onto eEe
    q0 = dc.qis_E.comparison.component(0)
    assert q0.rows == corner_s3.dim


def test_transport_shifted_and_padded(rc_identity, corner_s3):
    rc2 = derived.shift_certificate(rc_identity, 2, seed=1)
    dc2 = derived.transport_derived(rc2, corner_s3, corner_s3, seed=1)
    assert dc2.verified
    rc3 = derived.pad_certificate_with_cone(rc_identity, degree=0, seed=1)
    dc3 = derived.transport_derived(rc3, corner_s3, corner_s3, seed=1)
    assert dc3.verified
    rc4 = derived.shift_certificate(rc3, -2, seed=1)
    dc4 = derived.transport_derived(rc4, corner_s3, corner_s3, seed=1)
    assert dc4.verified


def test_shift_equivariance(rc_identity, corner_s3):
    dc0 = derived.transport_derived(rc_identity, corner_s3, corner_s3, seed=1)
    rc2 = derived.shift_certificate(rc_identity, 2, seed=1)
    dc2 = derived.transport_derived(rc2, corner_s3, corner_s3, seed=1)
    for n in range(dc0.eMf.lo, dc0.eMf.hi + 1):
        assert dc0.eMf.component(n).dim == dc2.eMf.component(n + 2).dim
        assert dc0.fNe.component(n).dim == dc2.fNe.component(n - 2).dim


def test_transport_generator_variation(Y_s3, corner_s3):
    ptag = [t for t in Y_s3.summand_tags if t.projective][0]
    endo2 = fdalg.endo_algebra(Y_s3.blk.algebra,
                               list(Y_s3.endo.summands) + [ptag.module])
    gc = morita.generator_variation_certificate(Y_s3.endo, endo2, seed=1)
    grc = derived.rickard_from_morita(gc)
    ctx_f = condense.proj_inj_corner_of_endo(endo2, seed=1)
    dc = derived.transport_derived(grc, corner_s3, ctx_f, seed=1)
    assert dc.verified
    assert dc.invariants_table[0].as_tuple() == \
        dc.invariants_table[1].as_tuple()


def test_derived_invariants_examples(kS3, kC3, Y_a4, Y_c3):
    assert derived.derived_invariants(kS3, seed=1).as_tuple() == (2, 3, 3)
    assert derived.derived_invariants(kC3, seed=1).as_tuple() == (1, 3, 3)
    ia = derived.derived_invariants(Y_a4.E, seed=1)
    ic = derived.derived_invariants(Y_c3.E, seed=1)
    assert ia.as_tuple() == ic.as_tuple()
    assert Y_a4.E.dim == 6 and Y_c3.E.dim == 6


def test_nilpotent_probe_a4(a4):
    r = derived.nilpotent_probe(a4, 3, seed=1)
    assert r.consistent
    assert r.basic_dim == 3 and r.basic_local and r.basic_commutative
    assert r.radical_series == [3, 2, 1]
    assert r.yoshida_invariants.as_tuple() == \
        r.sylow_yoshida_invariants.as_tuple()


def test_nilpotent_probe_c3(c3):
    r = derived.nilpotent_probe(c3, 3, seed=1)
    assert r.consistent


def test_nilpotent_probe_s3(s3):
    r = derived.nilpotent_probe(s3, 3, seed=1)
    assert not r.consistent
    assert any("simple classes" in d for d in r.diagnostics)


def test_invariant_mismatch_aborts(Y_s3, Y_c3, corner_s3, corner_c3):
    # abusing transport across blocks with different invariants must abort,
    # never silently emit; build a fake "certificate" shell and check the
    # guard by calling with mismatched corners
    rc = derived.identity_rickard_certificate(Y_s3.E)
    with pytest.raises(Exception):
        derived.transport_derived(rc, corner_s3, corner_c3, seed=1)
