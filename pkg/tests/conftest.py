import pytest
import pytest_asyncio
from click.testing import CliRunner
from httpx import ASGITransport, AsyncClient

from thuekit.main import app
from thuekit.models.word import Word
from thuekit.services.cross_section import CrossSectionService
from thuekit.services.systems import builtin_system


def W(text: str) -> Word:
    return Word.parse(text)


ZERO = W("0")


@pytest.fixture
def R():
    return builtin_system("R")


@pytest.fixture
def S():
    return builtin_system("S")


@pytest.fixture
def T():
    return builtin_system("T")


@pytest.fixture
def U():
    return builtin_system("U")


@pytest.fixture(scope="session")
def r_irreducibles():
    return CrossSectionService.irreducibles_dfa(builtin_system("R"))


@pytest.fixture
def r_irreducibles_file(tmp_path, r_irreducibles):
    path = tmp_path / "r_irreducibles.dfa"
    path.write_text(CrossSectionService.dump_dfa(r_irreducibles), encoding="utf-8")
    return path


@pytest.fixture
def runner():
    return CliRunner()


@pytest_asyncio.fixture
async def client():
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as ac:
        yield ac
