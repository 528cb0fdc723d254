import pytest
from typer.testing import CliRunner

from dftn.main import app

TINY_RUN = """\
[dataset]
synth = true
classes = 3
windows_per_class = 16
window_t = 24

[network]
kernels = 3,3,2
filters = 4,4,2
strides = 1,1,1
pools = 2,1,1
dense_units = 8

[training]
epochs = 3
batch_size = 16
"""


@pytest.fixture
def cli():
    return CliRunner()


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.ini"
    path.write_text(TINY_RUN)
    return path


@pytest.fixture(scope="session")
def trained_run(tmp_path_factory):
    """Output directory of one quantized ``train`` run on the tiny synthetic setup"""
    base = tmp_path_factory.mktemp("trained")
    config = base / "tiny.ini"
    config.write_text(TINY_RUN)
    out = base / "run"
    result = CliRunner().invoke(app, ["train", "--config", str(config), "--out", str(out)])
    assert result.exit_code == 0, result.output
    return out


PAIR_SCHEMA = """\
[dataset]
name = pair
channels = 2
window_t = 4
stride = 4

[branches]
left = 0-0
right = 1-1
"""


@pytest.fixture
def pair_stream(tmp_path):
    """Write a two-channel stream whose row ``i`` is ``(i, -i)`` with the given labels"""
    schema = tmp_path / "pair.ini"
    schema.write_text(PAIR_SCHEMA)

    def write(labels):
        path = tmp_path / "stream.csv"
        path.write_text("".join(f"{i}.0,{-i}.0,{label}\n" for i, label in enumerate(labels)))
        return path, schema

    return write
