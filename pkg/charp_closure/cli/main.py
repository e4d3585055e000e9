import argparse
import logging
import sys

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from charp_closure.src.config import ConfigManager
from charp_closure.src.errors import CharpError, ConfigError, SessionError
from charp_closure.src.verdicts import Status

from .dsl import parse_session
from .scenarios import run_scenarios
from .report import Report
from .runner import effective_config, run_session

console = Console()

STATUS_STYLES = {
    Status.IN: "green",
    Status.PASS: "green",
    Status.OUT: "red",
    Status.FAIL: "red",
    Status.UNKNOWN: "yellow",
    Status.RESOURCE_LIMIT: "magenta",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charp-closure",
        description="Frobenius and tight closure checks in prime characteristic",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", metavar="FILE", help="session file to run")
    source.add_argument(
        "--paper-examples", "--examples", dest="examples", action="store_true", help="run the built-in scenarios"
    )
    parser.add_argument("--emax", type=int, help="largest Frobenius exponent explored (default 4)")
    parser.add_argument("--window", type=int, help="closure chain stabilization window (default 2)")
    parser.add_argument("--order", choices=["grevlex", "lex"], help="monomial order")
    parser.add_argument("--seed", type=int, help="seed recorded in the report; checks take no random steps, so reruns are identical")
    parser.add_argument("--json-out", metavar="FILE", help="write the JSON report here")
    parser.add_argument("--parallel", action="store_true", help="run independent checks concurrently")
    parser.add_argument("--config", default="charp_config.json", metavar="FILE", help="engine configuration file")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    return parser


class CharpCLI:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config_manager = ConfigManager(args.config)

    def show_header(self):
        """Display the application header"""
        console.print("charp-closure: Frobenius and tight closure checks", style="dim")
        console.print()

    def show_report(self, report: Report):
        """Display one row per check"""
        if not report.entries:
            console.print("[dim]No checks in session[/dim]")
            console.print()
            return
        table = Table(show_header=True, header_style="dim")
        table.add_column("#", style="dim", justify="right")
        if any(e.scenario for e in report.entries):
            table.add_column("Scenario", style="dim")
        table.add_column("Check")
        table.add_column("Status")
        table.add_column("Expected", style="dim")
        table.add_column("Details")
        for entry in report.entries:
            style = STATUS_STYLES[entry.status]
            status = f"[{style}]{entry.status.value}[/{style}]"
            if not entry.certificate_verified:
                status += " [red](replay failed)[/red]"
            expected = entry.expected.value if entry.expected else ""
            if not entry.matched:
                expected = f"[red]{expected}[/red]"
            row = [str(entry.index)]
            if any(e.scenario for e in report.entries):
                row.append(entry.scenario or "")
            row += [f"{entry.name}({', '.join(entry.inputs)})", status, expected, entry.narrative]
            table.add_row(*row)
        console.print(table)
        console.print()

    def show_summary(self, report: Report):
        """Display the outcome line and the report digest"""
        mismatches = report.mismatches
        if mismatches:
            console.print(f"[red]{len(mismatches)} of {len(report.entries)} checks did not match[/red]")
        else:
            console.print(f"[green]{len(report.entries)} checks, all as expected[/green]")
        console.print(f"digest {report.digest()}", style="dim")

    def overrides(self) -> dict:
        return {
            "emax": self.args.emax,
            "window": self.args.window,
            "order": self.args.order,
            "seed": self.args.seed,
        }

    def run_report(self) -> Report:
        self.config_manager.apply_environment()
        config = self.config_manager.get_config()
        if self.args.examples:
            config = config._replace(**{k: v for k, v in self.overrides().items() if v is not None})
            return run_scenarios(config, parallel=self.args.parallel)
        with open(self.args.input, encoding="utf-8") as f:
            session = parse_session(f.read())
        effective_config(session, config, self.overrides())
        return run_session(session, config, self.overrides(), parallel=self.args.parallel)

    def run(self) -> int:
        """Run the session and return the process exit code"""
        self.show_header()
        try:
            report = self.run_report()
        except SessionError as e:
            console.print(f"[red]{type(e).__name__}: {e}[/red]")
            return 2
        except ConfigError as e:
            console.print(f"[red]Configuration error: {e}[/red]")
            return 2
        except CharpError as e:
            console.print(f"[red]{type(e).__name__}: {e}[/red]")
            return 2
        except OSError as e:
            console.print(f"[red]Cannot read {self.args.input}: {e}[/red]")
            return 2
        self.show_report(report)
        self.show_summary(report)
        if self.args.json_out:
            report.write(self.args.json_out)
            console.print(f"Report written to {self.args.json_out}", style="dim")
        return report.exit_code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
    )
    app = CharpCLI(args)
    code = app.run()
    if argv is None:
        sys.exit(code)
    return code
