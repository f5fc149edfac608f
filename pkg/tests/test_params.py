import pytest

from ringleader.core.params import InvalidSizeError, ProtocolParams, make_params


def test_minimum_ring():
    p = make_params(2)
    assert (p.psi, p.kappa_max, p.zeta) == (2, 64, 1)


def test_power_of_two():
    p = make_params(16)
    assert (p.psi, p.kappa_max, p.zeta) == (4, 128, 4)


def test_n100():
    p = make_params(100)
    assert (p.psi, p.kappa_max, p.zeta) == (7, 224, 15)
    assert 2**p.psi >= 100


@pytest.mark.parametrize("n", [2, 3, 5, 8, 13, 16, 17, 64, 100, 1000])
def test_invariants_hold(n):
    p = make_params(n)
    assert p.psi >= 2
    assert 2**p.psi >= n
    assert p.kappa_max >= 32 * p.psi
    assert p.zeta == -(-n // p.psi)


def test_rejects_tiny_ring():
    with pytest.raises(InvalidSizeError):
        make_params(1)
    with pytest.raises(InvalidSizeError):
        make_params(0)


def test_kappa_override_up_only():
    p = make_params(8, kappa_max=1000)
    assert p.kappa_max == 1000
    with pytest.raises(InvalidSizeError):
        make_params(8, kappa_max=10)


def test_rejects_undersized_knowledge():
    # psi failing 2**psi >= n has no defined semantics and is refused outright
    with pytest.raises(InvalidSizeError):
        ProtocolParams(n=100, psi=4, kappa_max=128, zeta=25)


def test_rejects_inconsistent_zeta():
    with pytest.raises(InvalidSizeError):
        ProtocolParams(n=16, psi=4, kappa_max=128, zeta=5)
