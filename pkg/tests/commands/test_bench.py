import numpy as np
import pytest

from dftn.commands.bench import BenchResult, ConvCase, bench_case, default_cases, parse_cases
from dftn.errors import UsageError
from dftn.main import app


def test_parse_cases():
    assert parse_cases("2x3x3x16, 1X4x2x8") == [ConvCase(2, 3, 3, 16), ConvCase(1, 4, 2, 8)]


@pytest.mark.parametrize("text", ["0x3x3x16", "2x3x3", "2xax3x16", "2x3x20x16"])
def test_parse_cases_rejects_bad_sizes(text):
    with pytest.raises(UsageError):
        parse_cases(text)


def test_default_cases_follow_default_network():
    cases = default_cases()

    assert [c.kernel for c in cases] == [11, 10, 6]
    assert [c.channels_out for c in cases] == [50, 40, 30]
    assert cases[0].channels_in == 1
    assert cases[0].length == 64


def test_bench_case_is_exact():
    result = bench_case(ConvCase(3, 4, 3, 20), batch=4, repeat=1, rng=np.random.default_rng(0))

    assert result.exact
    assert result.dense_seconds >= 0.0


def test_bench_command(cli):
    result = cli.invoke(app, ["bench", "--sizes", "2x3x3x16", "--batch", "4", "--repeat", "1"])

    assert result.exit_code == 0, result.output
    assert "agree exactly" in result.output


def test_bench_zero_size_is_a_usage_error(cli):
    result = cli.invoke(app, ["bench", "--sizes", "0x3x3x16"])

    assert result.exit_code == 2


def test_bench_disagreement_fails(cli, mocker):
    mocker.patch(
        "dftn.commands.bench.bench_case",
        side_effect=lambda case, *_: BenchResult(case, False, 1.0, 1.0),
    )

    result = cli.invoke(app, ["bench", "--sizes", "2x3x3x16", "--repeat", "1"])

    assert result.exit_code == 1
