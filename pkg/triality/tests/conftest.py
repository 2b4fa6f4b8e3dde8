import pytest

from triality.config import Config
from triality.services.corpus_service import gen_corpus
from triality.services.gtriality_service import wreath_cube
from triality.services.loop_service import chein_loop, cyclic_group, octonion_unit_loop, symmetric_group_s3
from triality.services.malcev_service import build_cayley, ortho_lie

OVERRIDABLE = ("SEED", "SAMPLES", "CONV_SAMPLES", "DEGREE", "MAX_LOOP_ORDER")


@pytest.fixture(autouse=True)
def restore_config():
    """CLI flags write to Config; put the values back after each test"""
    saved = {key: getattr(Config, key) for key in OVERRIDABLE}
    yield
    for key, value in saved.items():
        setattr(Config, key, value)


@pytest.fixture(scope="session")
def s3():
    loop, _ = symmetric_group_s3()
    return loop


@pytest.fixture(scope="session")
def c4():
    return cyclic_group(4)


@pytest.fixture(scope="session")
def chein12(s3):
    return chein_loop(s3)


@pytest.fixture(scope="session")
def o16():
    return octonion_unit_loop()


@pytest.fixture(scope="session")
def s3_wreath(s3):
    return wreath_cube(s3)


@pytest.fixture(scope="session")
def octonions():
    return build_cayley(-1, -1, -1)


@pytest.fixture(scope="session")
def ortho(octonions):
    return ortho_lie(octonions)


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    return gen_corpus(out)
