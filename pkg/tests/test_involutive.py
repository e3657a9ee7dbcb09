"""The involutive layer: basic involution, derivative endomorphisms, the
connected-sum involution, and the distinguished-basis verification."""

import pytest

from cfkzero.algebra import Mode, RingElem
from cfkzero.complexes import Endomorphism
from cfkzero.involutive import (
    basic_involution,
    build_xyz_basis,
    phi_psi,
    tensor_involution,
    tensor_involution_inverse,
    verify_lemma_43_44,
)
from cfkzero.knots import ShapeError
from cfkzero.standard import seq_to_complex


def staircase(seq, prefix="z"):
    return seq_to_complex(seq, Mode.FULL, prefix=prefix)


def unit_image(endo, src):
    image = endo.apply_gen(src)
    assert len(image) == 1
    ((tgt, elem),) = image.items()
    assert elem.is_unit
    return tgt


def test_basic_involution_on_the_trefoil():
    data = basic_involution(staircase((1, -1)))
    assert unit_image(data.iota, "z0") == "z2"
    assert unit_image(data.iota, "z1") == "z1"
    assert unit_image(data.iota, "z2") == "z0"
    assert data.iota.respects_grading()


def test_basic_involution_on_t45():
    data = basic_involution(staircase((1, -3, 2, -2, 3, -1)))
    for i in range(7):
        assert unit_image(data.iota, f"z{i}") == f"z{6 - i}"


def test_basic_involution_on_the_unknot():
    data = basic_involution(staircase(()))
    assert unit_image(data.iota, "z0") == "z0"


def test_basic_involution_squares_to_the_identity():
    data = basic_involution(staircase((1, -2, 2, -1)))
    square = data.iota.compose(data.iota)
    assert all(t == s and e.is_unit for (t, s), e in square.entries.items())
    assert len(square.entries) == 5


def test_basic_involution_rejects_non_staircases():
    with pytest.raises(ShapeError):
        basic_involution(staircase((1, -1)).dual())
    with pytest.raises(ShapeError):
        basic_involution(seq_to_complex((1, -2, -1, 1, -1, 1, 2, -1)))


def test_phi_psi_on_the_trefoil():
    phi, psi = phi_psi(staircase((1, -1)))
    assert unit_image(phi, "z1") == "z0"
    assert unit_image(psi, "z1") == "z2"
    assert not phi.apply_gen("z0") and not phi.apply_gen("z2")


def test_phi_psi_on_the_unknot():
    phi, psi = phi_psi(staircase(()))
    assert phi.is_zero() and psi.is_zero()


def test_phi_psi_on_t45():
    phi, _ = phi_psi(staircase((1, -3, 2, -2, 3, -1)))
    assert not phi.apply_gen("z3")  # the U^2 arrow has even exponent
    assert unit_image(phi, "z1") == "z0"
    assert phi.apply_gen("z5") == {"z4": RingElem.monomial(2, 0, Mode.FULL)}


def test_phi_psi_anticommutator_is_a_chain_map():
    cx = staircase((1, -2, 2, -1)).tensor(staircase((1, -1), prefix="w"))
    phi, psi = phi_psi(cx)
    anticommutator = phi.compose(psi) + psi.compose(phi)
    assert anticommutator.is_chain_map()


def test_tensor_involution_with_the_unknot_is_the_involution():
    data = tensor_involution(
        basic_involution(staircase((1, -1), prefix="x")),
        basic_involution(staircase((), prefix="u")),
    )
    assert unit_image(data.iota, "(x0|u0)") == "(x2|u0)"
    assert unit_image(data.iota, "(x1|u0)") == "(x1|u0)"


def test_tensor_involution_of_two_trefoils():
    left = basic_involution(staircase((1, -1), prefix="x"))
    right = basic_involution(staircase((1, -1), prefix="y"))
    data = tensor_involution(left, right)
    # the correction lands exactly where both factor images carry odd powers
    image = data.iota.apply_gen("(x1|y1)")
    assert image == {
        "(x1|y1)": RingElem.one(Mode.FULL),
        "(x0|y2)": RingElem.one(Mode.FULL),
    }
    # iota^2 = id + N with N off-diagonal and N^2 = 0
    identity = Endomorphism(
        data.complex,
        {(g.ident, g.ident): RingElem.one(Mode.FULL) for g in data.complex.gens},
        (0, 0),
        False,
    )
    nilpotent = data.iota.compose(data.iota) + identity
    assert nilpotent.entries
    assert all(t != s for (t, s) in nilpotent.entries)
    assert nilpotent.compose(nilpotent).is_zero()


def test_tensor_involution_inverse_is_exact():
    left = basic_involution(staircase((1, -2, 1, -1, 1, -1, 2, -1), prefix="x"))
    right = basic_involution(staircase((1, -1, 1, -1), prefix="y"))
    iota = tensor_involution(left, right).iota
    inverse = tensor_involution_inverse(left, right)
    composite = iota.compose(inverse)
    assert all(t == s and e.is_unit for (t, s), e in composite.entries.items())
    assert len(composite.entries) == 9 * 5


def test_basis_family_counts_q3():
    fam = build_xyz_basis((1, -1, 1, -1), 3)
    assert len(fam.x_elements) == 7  # 4n + q - 1 + 1 with n = 1, q = 3
    assert sorted(fam.y) == [(1, 1)]
    assert sorted(fam.y_prime) == [(1, 1)]
    assert not fam.z and not fam.z_prime
    # j = k' = k: the substitutions keep every index in range
    assert len(fam.all_elements()) == 15


def test_basis_family_counts_q5():
    fam = build_xyz_basis((1, -1, 1, -1), 5)
    assert sorted(fam.y) == [(1, 1)]
    assert not fam.z and not fam.z_prime
    assert len(fam.all_elements()) == 17  # independent but not spanning: k is even


def test_basis_family_counts_q7():
    fam = build_xyz_basis((1, -1, 1, -1), 7)
    assert sorted(fam.y) == [(1, 1), (1, 3)]
    assert sorted(fam.z) == [(1, 1)]
    assert len(fam.all_elements()) == len(fam.complex)  # odd k: a full basis


def test_lemma_verification_passes():
    for host, q in [((1, -1, 1, -1), 3), ((1, -1, 1, -1), 5), ((1, -2, 2, -1), 3),
                    ((1, -2, 1, -1, 1, -1, 2, -1), 7)]:
        report = verify_lemma_43_44(host, q)
        assert report.passed, "\n".join(str(c) for c in report.checks if not c.passed)


def test_lemma_report_lines_are_structured():
    report = verify_lemma_43_44((1, -1, 1, -1), 3)
    text = str(report)
    assert "X spans a subcomplex: ok" in text
    assert "involution reverses the X listing: ok" in text
    assert "2b coefficient collapses" in text


def test_lemma_rejects_bad_hosts():
    with pytest.raises(ShapeError):
        verify_lemma_43_44((1, -3, 1, -1, 3, -1), 3)  # length 2 mod 4
    with pytest.raises(ShapeError):
        verify_lemma_43_44((2, -1, 1, -2), 3)  # a horizontal step of power 2
    with pytest.raises(ShapeError):
        verify_lemma_43_44((1, -1, 1, -1), 4)
