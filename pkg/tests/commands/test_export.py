from dftn.commands.export import layer_table
from dftn.main import app
from dftn.model import PackedModel


def test_export_reproduces_trained_model(cli, trained_run, tmp_path):
    target = tmp_path / "again.dftn"

    result = cli.invoke(app, ["export", str(trained_run / "state.npz"), "--out", str(target)])

    assert result.exit_code == 0, result.output
    assert target.read_bytes() == (trained_run / "model.dftn").read_bytes()


def test_export_missing_checkpoint(cli, tmp_path):
    result = cli.invoke(app, ["export", str(tmp_path / "absent.npz")])

    assert result.exit_code == 2


def test_export_rejects_corrupt_checkpoint(cli, tmp_path):
    path = tmp_path / "state.npz"
    path.write_bytes(b"not a checkpoint")

    result = cli.invoke(app, ["export", str(path)])

    assert result.exit_code == 1


def test_layer_table_lists_every_layer(trained_run):
    model = PackedModel.from_bytes((trained_run / "model.dftn").read_bytes())

    table = layer_table(model)

    assert table.row_count == len(model.layers)
