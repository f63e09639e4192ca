"""Command line entry points: repl, run, serve, corpus."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import AUTO, INTERACTIVE
from .revision import NeedsUser
from .session import Session
from .terms import TermId


def _stdin_dialog(session: Session):
    """Interactive culprit selection on stdin for REPL sessions."""

    def dialog(needs_user: NeedsUser) -> list[TermId]:
        store = session.store
        print("Contradiction: "
              f"{store.display(needs_user.contradiction.proposition)} and "
              f"{store.display(needs_user.contradiction.negation)}")
        print("Candidate hypotheses:")
        for i, info in enumerate(needs_user.candidates, start=1):
            extra = []
            if info.sources:
                extra.append("sources: " + ", ".join(store.display(s) for s in info.sources))
            extra.append(f"supports side {info.side}")
            print(f"  {i}) {store.display(info.tid)}  ({'; '.join(extra)})")
        while True:
            raw = input("retract (numbers, comma-separated)> ").strip()
            try:
                picks = [int(p) for p in raw.replace(",", " ").split()]
            except ValueError:
                picks = []
            chosen = [needs_user.candidates[p - 1].tid for p in picks
                      if 1 <= p <= len(needs_user.candidates)]
            if chosen:
                return chosen
            print("pick at least one listed number")

    return dialog


def _repl(args) -> int:
    session = Session(mode=args.mode, expert=args.expert, depth_cap=args.depth_cap)
    session.engine.dialog = _stdin_dialog(session)
    print("sneng repl -- commands end with '.', '!' or '?'; %quit exits")
    while True:
        try:
            line = input("sneng> ")
        except EOFError:
            print()
            return 0
        except KeyboardInterrupt:
            print()
            return 0
        resp = session.execute(line)
        for out in resp.lines:
            print(out)
        if resp.quit:
            return 0


def _run(args) -> int:
    text = Path(args.script).read_text(encoding="utf-8")
    session = Session(mode=args.mode, expert=args.expert, depth_cap=args.depth_cap)
    code = session.run_batch(text)
    sys.stdout.write(session.transcript_text())
    return code


def _serve(args) -> int:
    from .server import serve

    serve(host=args.host, port=args.port, mode=args.mode, expert=args.expert)
    return 0


def _corpus(args) -> int:
    from .corpus import run_corpus

    return run_corpus(Path(args.dir), update=args.update, only=args.case)


def main(argv=None) -> int:
    top = argparse.ArgumentParser(prog="sneng")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mode", choices=(AUTO, INTERACTIVE), default=AUTO)
        p.add_argument("--expert", action="store_true")
        p.add_argument("--depth-cap", type=int, default=50)

    p = sub.add_parser("repl", help="interactive session")
    common(p)
    p.set_defaults(func=_repl)

    p = sub.add_parser("run", help="run a script in batch mode")
    p.add_argument("script")
    common(p)
    p.set_defaults(func=_run)

    p = sub.add_parser("serve", help="line-delimited JSON protocol over TCP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7311)
    common(p)
    p.set_defaults(func=_serve)

    p = sub.add_parser("corpus", help="run the demo corpus against its goldens")
    p.add_argument("--dir", default="corpus")
    p.add_argument("--case", default=None)
    p.add_argument("--update", action="store_true", help="rewrite golden transcripts")
    p.set_defaults(func=_corpus)

    args = top.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
