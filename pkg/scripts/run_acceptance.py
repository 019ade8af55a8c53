"""Print one pass/fail line per acceptance criterion; exit 1 if any fails."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from test_acceptance import CRITERIA, report_line  # noqa: E402


def main() -> int:
    failed = 0
    for num, title, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(report_line(num, title, ok, detail), flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
