"""Sessions: command evaluation, transcripts, persistence.

A session owns one engine and processes commands strictly in order.  The
same renderer backs the REPL, batch runs, and the wire protocol, so a given
script always produces a byte-identical transcript.

Persistence writes the context's hypotheses as a canonical script (one
assertion per line, term-id order) behind a format-version header; loading
replays the script with automatic revision suppressed, so a dumped network
round-trips even when it holds an unresolved contradiction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .acting import ActError
from .beliefs import BeliefError
from .engine import AUTO, Engine, Event, INTERACTIVE
from .inference import AskResult, InferenceError
from .parser import Command, ParseError, parse_command, parse_wff
from .revision import Dialog
from .terms import TermError, TermId

FORMAT_HEADER = "%format sneng-1"

_WFF_REF = re.compile(r"\Awff(\d+)\Z")


class LoadError(Exception):
    pass


@dataclass
class Response:
    command: str
    kind: str  # assert | assert_forward | query | directive | error
    lines: list[str] = field(default_factory=list)
    error: Optional[str] = None
    ask: Optional[AskResult] = None
    events: list[Event] = field(default_factory=list)
    quit: bool = False


class Session:
    def __init__(self, engine: Optional[Engine] = None, mode: str = AUTO,
                 expert: bool = False, dialog: Optional[Dialog] = None,
                 depth_cap: int = 50):
        self.engine = engine or Engine(depth_cap=depth_cap)
        self.engine.mode = mode
        self.engine.dialog = dialog
        self.expert = expert
        self.transcript: list[str] = []

    # -- helpers -----------------------------------------------------------

    @property
    def store(self):
        return self.engine.store

    def _supports_suffix(self, t: TermId) -> str:
        recs = self.engine.beliefs.supports_in(t, self.engine.ctx)
        parts = []
        for rec in recs:
            labels = sorted(rec.origin_set, key=lambda h: self.engine.wff_index.get(h, h))
            inner = ",".join(self.engine.label(h) for h in labels)
            parts.append(f"[{rec.tag} {{{inner}}}]")
        return " " + " ".join(parts) if parts else ""

    def _wff_line(self, t: TermId, supports: bool = False) -> str:
        flag = "!" if self.engine.is_asserted(t) else ""
        line = f"{self.engine.label(t)}{flag}: {self.store.display(t)}"
        if supports:
            line += self._supports_suffix(t)
        return line

    def _render_events(self, events: list[Event]) -> list[str]:
        lines = []
        for ev in events:
            if ev.kind in ("assert", "derive"):
                lines.append(self._wff_line(ev.data["term"]))
            elif ev.kind == "contradiction":
                p, n = ev.data["p"], ev.data["n"]
                lines.append(f"CONTRADICTION: {self.engine.label(p)} and {self.engine.label(n)}")
            elif ev.kind == "revision":
                report = ev.data["report"]
                verb = "AUTO-RETRACT" if report.mode == "automatic" else "RETRACT"
                for h in report.retracted:
                    lines.append(f"{verb}: {self.engine.label(h)}: {self.store.display(h)}")
                for d in report.dropped:
                    lines.append(f"DROPPED: {self.engine.label(d)}: {self.store.display(d)}")
            elif ev.kind == "revision_error":
                lines.append(f"ERROR: {ev.data['message']}")
            elif ev.kind == "retract":
                report = ev.data["report"]
                h = report.removed
                lines.append(f"RETRACTED: {self.engine.label(h)}: {self.store.display(h)}")
                for d in report.dropped:
                    if d != h:
                        lines.append(f"DROPPED: {self.engine.label(d)}: {self.store.display(d)}")
            elif ev.kind == "act":
                lines.append(f"ACT: {self.store.display(ev.data['term'])}")
            elif ev.kind == "act_error":
                lines.append(f"ACT-ERROR: {ev.data['message']}")
            elif ev.kind == "info":
                lines.append(f"NOTE: {ev.data['message']}")
        return lines

    # -- command execution ----------------------------------------------------

    def execute(self, line: str) -> Response:
        """Evaluate one input line; echo and output go to the transcript."""
        stripped = line.strip()
        if not stripped or stripped.startswith(";"):
            return Response(command=stripped, kind="directive")
        self.transcript.append(f"> {stripped}")
        if stripped.startswith("%"):
            resp = self._directive(stripped)
        else:
            resp = self._command(stripped)
        self.transcript.extend(resp.lines)
        return resp

    def _command(self, text: str) -> Response:
        try:
            cmd = parse_command(self.store, text)
        except ParseError as exc:
            msg = f"SYNTAX ERROR: {exc}"
            return Response(command=text, kind="error", lines=[msg], error=str(exc))
        self.engine.begin_command()
        try:
            if cmd.kind == "assert":
                self.engine.assert_hyp(cmd.term)
            elif cmd.kind == "assert_forward":
                self.engine.assert_forward(cmd.term)
            else:
                return self._query(cmd)
        except (BeliefError, TermError, InferenceError, ActError) as exc:
            lines = self._render_events(self.engine.events)
            lines.append(f"ERROR: {exc}")
            return Response(command=text, kind="error", lines=lines, error=str(exc),
                            events=list(self.engine.events))
        lines = self._render_events(self.engine.events)
        return Response(command=text, kind=cmd.kind, lines=lines,
                        events=list(self.engine.events))

    def _query(self, cmd: Command) -> Response:
        result = self.engine.ask(cmd.term)
        # intermediate derivations are implicit in the answers; show the rest
        interesting = [ev for ev in self.engine.events if ev.kind not in ("derive", "assert")]
        lines = self._render_events(interesting)
        if result.answers:
            for ans in result.answers:
                lines.append(self._wff_line(ans.instance, supports=self.expert))
        else:
            lines.append("(no answers)")
        return Response(command=cmd.text, kind="query", lines=lines, ask=result,
                        events=list(self.engine.events))

    # -- Tell/Ask programmatic interface -----------------------------------------

    def tell(self, text: str) -> Response:
        """Programmatic assert; accepts 'wff.' or 'wff!'."""
        text = text.strip()
        if not text.endswith((".", "!")):
            text += "."
        return self.execute(text)

    def ask(self, text: str) -> AskResult:
        text = text.strip()
        if not text.endswith("?"):
            text += "?"
        resp = self.execute(text)
        if resp.error:
            raise ValueError(resp.error)
        assert resp.ask is not None
        return resp.ask

    # -- directives ----------------------------------------------------------------

    def _resolve_wff_arg(self, arg: str) -> TermId:
        arg = arg.strip()
        m = _WFF_REF.match(arg)
        if m:
            idx = int(m.group(1))
            for tid, i in self.engine.wff_index.items():
                if i == idx:
                    return tid
            raise ValueError(f"no such wff: {arg}")
        return parse_wff(self.store, arg)

    def _directive(self, text: str) -> Response:
        parts = text[1:].split(None, 1)
        name = parts[0] if parts else ""
        arg = parts[1].strip() if len(parts) > 1 else ""
        try:
            if name == "quit":
                return Response(command=text, kind="directive", quit=True)
            if name == "list":
                lines = [self._wff_line(t, supports=self.expert)
                         for t in sorted(self.engine.beliefs.asserted_terms(self.engine.ctx),
                                         key=lambda t: self.engine.wff_index.get(t, t))]
                return Response(command=text, kind="directive", lines=lines)
            if name == "supports":
                t = self._resolve_wff_arg(arg)
                status = self.engine.status(t)
                lines = [self._wff_line(t)]
                if status.supports:
                    for rec in status.supports:
                        labels = sorted(rec.origin_set,
                                        key=lambda h: self.engine.wff_index.get(h, h))
                        inner = ",".join(self.engine.label(h) for h in labels)
                        lines.append(f"  [{rec.tag} {{{inner}}}]")
                else:
                    lines.append("  (not asserted)")
                return Response(command=text, kind="directive", lines=lines)
            if name == "retract":
                t = self._resolve_wff_arg(arg)
                self.engine.begin_command()
                self.engine.retract_hyp(t)
                lines = self._render_events(self.engine.events)
                return Response(command=text, kind="directive", lines=lines,
                                events=list(self.engine.events))
            if name == "mode":
                if arg not in (AUTO, INTERACTIVE):
                    raise ValueError("mode must be 'auto' or 'interactive'")
                self.engine.mode = arg
                return Response(command=text, kind="directive", lines=[f"mode: {arg}"])
            if name == "expert":
                if arg not in ("on", "off"):
                    raise ValueError("expert must be 'on' or 'off'")
                self.expert = arg == "on"
                return Response(command=text, kind="directive", lines=[f"expert: {arg}"])
            if name == "save":
                path = arg.strip().strip('"')
                if not path:
                    raise ValueError("%save needs a path")
                self.dump(path)
                return Response(command=text, kind="directive", lines=[f"saved {path}"])
            if name == "load":
                path = arg.strip().strip('"')
                if not path:
                    raise ValueError("%load needs a path")
                count = self.load_into(path)
                return Response(command=text, kind="directive",
                                lines=[f"loaded {path} ({count} hypotheses)"])
            raise ValueError(f"unknown directive %{name}")
        except (ValueError, ParseError, BeliefError, TermError, LoadError) as exc:
            msg = f"ERROR: {exc}"
            return Response(command=text, kind="error", lines=[msg], error=str(exc))

    # -- persistence -------------------------------------------------------------------

    def dumps(self) -> str:
        lines = [FORMAT_HEADER]
        for h in self.engine.hypotheses():
            lines.append(f"{self.store.display(h)}.")
        return "\n".join(lines) + "\n"

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    def load_into(self, path) -> int:
        return self.replay(Path(path).read_text(encoding="utf-8"))

    def replay(self, text: str) -> int:
        """Re-assert a dumped network into this session (revision suppressed)."""
        lines = text.splitlines()
        if not lines or lines[0].strip() != FORMAT_HEADER:
            raise LoadError(f"unsupported dump format (expected '{FORMAT_HEADER}' header)")
        count = 0
        previous = self.engine.auto_revision
        self.engine.auto_revision = False
        try:
            for i, raw in enumerate(lines[1:], start=2):
                stripped = raw.strip()
                if not stripped or stripped.startswith(";"):
                    continue
                try:
                    cmd = parse_command(self.store, stripped)
                except ParseError as exc:
                    raise LoadError(f"line {i}: {exc}") from None
                if cmd.kind != "assert":
                    raise LoadError(f"line {i}: dump files may only contain assertions")
                self.engine.begin_command()
                self.engine.assert_hyp(cmd.term)
                count += 1
        finally:
            self.engine.auto_revision = previous
        return count

    @classmethod
    def load(cls, path, **kwargs) -> "Session":
        session = cls(**kwargs)
        session.load_into(path)
        return session

    # -- batch ------------------------------------------------------------------------------

    def run_batch(self, text: str) -> int:
        """Evaluate every line; fail fast on syntax errors. 0 iff error-free."""
        failed = False
        for raw in text.splitlines():
            resp = self.execute(raw)
            if resp.quit:
                break
            if resp.error:
                failed = True
                if resp.lines and resp.lines[-1].startswith("SYNTAX ERROR"):
                    break
            for ev in resp.events:
                if ev.kind in ("revision_error", "act_error"):
                    failed = True
        return 1 if failed else 0

    def transcript_text(self) -> str:
        return "\n".join(self.transcript) + ("\n" if self.transcript else "")
