"""
Script to regenerate the golden JSON reports under tests/golden
Usage: python scripts/update_golden.py [command ...]
"""
import contextlib
import io
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from toriq.core.config import settings  # noqa: E402
from toriq.main import main  # noqa: E402
from toriq.utils.fixtures import list_fixtures  # noqa: E402

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"
COMMANDS = ["validate", "hhat", "separation", "tv-quotient", "tp-quotient", "image", "diagnose"]


def write_golden(command: str, fixture: str) -> int:
    """Run one command on one fixture and store its JSON output"""
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        code = main([command, fixture, "--json"])
    path = GOLDEN_DIR / f"{command}__{fixture}.json"
    path.write_text(buffer.getvalue(), encoding="utf-8")
    print(f"  {path.name}  (exit {code})")
    return code


if __name__ == "__main__":
    commands = sys.argv[1:] or COMMANDS
    unknown = [name for name in commands if name not in COMMANDS]
    if unknown:
        print(f"Unknown command(s): {', '.join(unknown)}")
        print(f"Choose from: {', '.join(COMMANDS)}")
        sys.exit(1)

    settings.TORIQ_COLOR = False
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    fixtures = [name for name, _ in list_fixtures()]
    print(f"Writing {len(commands) * len(fixtures)} golden files to {GOLDEN_DIR}")
    for command in commands:
        for fixture in fixtures:
            write_golden(command, fixture)
