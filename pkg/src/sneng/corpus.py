"""Demo corpus harness: run scripts against golden transcripts.

Cases live in a corpus directory as `<name>.snlog` / `<name>.golden` pairs.
The scale knowledge base is generated, not stored: a chain of ground
or-entailments long enough to put the store around a thousand terms.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .session import Session

CASES = ("simpsons", "ancestors", "traffic-light", "jobs-puzzle", "steamroller")


@dataclass
class CaseResult:
    name: str
    ok: bool
    diff: str = ""


def run_script_text(text: str, mode: str = "auto", expert: bool = False,
                    depth_cap: int = 50) -> tuple[int, str, Session]:
    session = Session(mode=mode, expert=expert, depth_cap=depth_cap)
    code = session.run_batch(text)
    return code, session.transcript_text(), session


def run_case(name: str, directory: Path) -> CaseResult:
    script = (directory / f"{name}.snlog").read_text(encoding="utf-8")
    golden_path = directory / f"{name}.golden"
    _, transcript, _ = run_script_text(script)
    if not golden_path.exists():
        return CaseResult(name, False, diff=f"missing golden transcript {golden_path}")
    golden = golden_path.read_text(encoding="utf-8")
    if transcript == golden:
        return CaseResult(name, True)
    diff = "\n".join(difflib.unified_diff(golden.splitlines(), transcript.splitlines(),
                                          fromfile=f"{name}.golden", tofile=f"{name}.actual",
                                          lineterm=""))
    return CaseResult(name, False, diff=diff)


def update_golden(name: str, directory: Path) -> None:
    script = (directory / f"{name}.snlog").read_text(encoding="utf-8")
    _, transcript, _ = run_script_text(script)
    (directory / f"{name}.golden").write_text(transcript, encoding="utf-8")


def run_corpus(directory: Path, update: bool = False, only: Optional[str] = None) -> int:
    names = [only] if only else list(CASES)
    failed = 0
    for name in names:
        if update:
            update_golden(name, directory)
            print(f"UPDATED {name}")
            continue
        result = run_case(name, directory)
        print(f"{'PASS' if result.ok else 'FAIL'} {name}")
        if not result.ok:
            failed += 1
            if result.diff:
                print(result.diff)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# scale generator
# ---------------------------------------------------------------------------

def generate_scale_script(links: int = 499, query: bool = True) -> str:
    """A chain a0 => a1 => ... with one seed hypothesis.

    Terms: links+1 atoms plus links rule terms -- about a thousand for the
    default size.  The closing query walks the whole chain backward.
    """
    lines = ["; generated scale knowledge base", "a0."]
    for i in range(links):
        lines.append(f"a{i} => a{i + 1}.")
    if query:
        lines.append(f"a{links}?")
    return "\n".join(lines) + "\n"
