import pytest

from fracbound.funcs import builtin_f, builtin_h, certify_f, certify_h


def _certified_h(name, params=None):
    h = builtin_h(name, params)
    certify_h(h)
    return h


def _certified_f(name, params):
    f = builtin_f(name, params)
    certify_f(f)
    return f


@pytest.fixture(scope="session")
def h_identity():
    return _certified_h("identity")


@pytest.fixture(scope="session")
def h_power_half():
    return _certified_h("power", {"s": 0.5})


@pytest.fixture(scope="session")
def h_one():
    return _certified_h("one")


@pytest.fixture(scope="session")
def h_godunova():
    return _certified_h("godunova")


@pytest.fixture(scope="session")
def f_square():
    return _certified_f("square", {"a": 0.0, "b": 1.0})


@pytest.fixture(scope="session")
def f_cube_02():
    return _certified_f("cube", {"a": 0.0, "b": 2.0})


@pytest.fixture(scope="session")
def f_exp():
    return _certified_f("exp", {"a": 0.0, "b": 1.0})


@pytest.fixture(scope="session")
def f_linear():
    return _certified_f("linear", {"a": 0.0, "b": 1.0, "c": 1.0})


@pytest.fixture(scope="session")
def f_const():
    return _certified_f("const", {"a": 0.0, "b": 2.0, "c": 7.0})
