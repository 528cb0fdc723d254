import sys

import typer

from dftn import __version__
from dftn.commands import logs
from dftn.commands.bench import bench
from dftn.commands.eval import eval_model
from dftn.commands.export import export
from dftn.commands.infer import infer
from dftn.commands.selftest import selftest
from dftn.commands.train import train
from dftn.constants import EXIT_FAILURE, EXIT_USAGE
from dftn.errors import DftnError, UsageError
from dftn.logging import get_logger, log_application_event, setup_logging
from dftn.utils.console import error

app = typer.Typer(
    help="[bold blue]DFTN[/bold blue] - ternary quantization-aware training and "
    "packed popcount inference for sensor-window CNNs",
    rich_markup_mode="rich",
)

app.command("train")(train)
app.command("eval")(eval_model)
app.command("infer")(infer)
app.command("export")(export)
app.command("bench")(bench)
app.command("selftest")(selftest)
app.add_typer(logs.app, name="logs")


@app.callback(invoke_without_command=True)
def callback(
    ctx: typer.Context,
    version: bool = typer.Option(False, "--version", help="Show the version and exit"),
):
    """
    [bold blue]DFTN[/bold blue] - ternary quantization-aware training

    Train 2-bit sensor-window networks, export them as packed DFTN files and
    run exact popcount inference.
    """
    if version:
        typer.echo(f"dftn {__version__}")
        raise typer.Exit()
    if not ctx.invoked_subcommand:
        typer.echo(ctx.get_help())


def main():
    setup_logging()
    logger = get_logger("dftn.main")
    log_application_event("started", details={"args": " ".join(sys.argv[1:]) or "-"})

    try:
        app()
    except UsageError as e:
        log_application_event("usage error", level="error", details={"error": e})
        error(str(e))
        sys.exit(EXIT_USAGE)
    except DftnError as e:
        log_application_event("failed", level="error", details={"error": e})
        error(str(e))
        sys.exit(EXIT_FAILURE)
    except Exception as e:
        logger.error(f"Unhandled exception in main: {str(e)}")
        raise
    finally:
        log_application_event("finished")


if __name__ == "__main__":
    main()
