from fractions import Fraction

import pytest

import bvtrace


def test_moyal():
    assert bvtrace.star("p1", "q1", order=4) == "p1*q1 + 1/2*h"
    assert bvtrace.bracket("p1", "q1") == "1"


def test_wheel_and_a_hat():
    assert bvtrace.wheel(2) == Fraction(-1, 24)
    assert bvtrace.wheel(3) == 0
    assert bvtrace.a_hat(4) == [1, 0, Fraction(-1, 24), 0, Fraction(7, 5760)]


def test_trace():
    assert bvtrace.trace("1", n=2) == "u^2"
    assert bvtrace.trace("p1 | q1") == "0"


def test_eisenstein_and_fock():
    assert bvtrace.eisenstein(2, 3) == [1, -24, -72, -96]
    assert bvtrace.fock_character("beta_gamma", 3) == [1, 2, 5, 10]


def test_ope_and_qme():
    assert bvtrace.ope(":beta gamma:", ":beta gamma:") == {2: "-h^2"}
    assert bvtrace.qme("c")["zero"]
    assert bvtrace.qme(":beta gamma:")["vacuous"]


def test_recognize():
    r = bvtrace.recognize("(E2^2 - E4)/12", 4, 20)
    assert r["success"] and r["form"] == "1/12*E2^2 - 1/12*E4"


def test_errors():
    with pytest.raises(bvtrace.ParseError):
        bvtrace.star("p1 +", "q1")
    with pytest.raises(bvtrace.DomainError):
        bvtrace.fock_character("ising", 3)


def test_command_line():
    doc = bvtrace.command("wheel", "2")
    assert doc["schema"] == "bvtrace/1" and doc["result"] == "-1/24"
    code, out, _ = bvtrace.run("star", "p1 +", "q1")
    assert code == 1 and '"syntax"' in out
