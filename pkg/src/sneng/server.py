"""Serve mode: newline-delimited JSON messages over TCP.

Each connection owns an independent session (no shared knowledge base).
Every message is a single JSON object with an `op` field; see PROTOCOL.md
for the full schema.  When a command raises a contradiction that needs a
human decision, the server emits `revision_request` and the client must
answer with `revision_choice` before anything else.
"""

from __future__ import annotations

import json
import socketserver
from typing import Optional

from .engine import Event
from .revision import NeedsUser
from .session import Response, Session
from .terms import TermId


class ProtocolViolation(Exception):
    pass


def _candidate_payload(session: Session, needs_user: NeedsUser) -> dict:
    store = session.store
    candidates = []
    for info in needs_user.candidates:
        candidates.append({
            "index": session.engine.wff_index.get(info.tid),
            "text": store.display(info.tid),
            "sources": [store.display(s) for s in info.sources],
            "origin_sets": [sorted(store.display(h) for h in oset)
                            for oset in info.origin_sets],
            "side": info.side,
        })
    return {
        "op": "revision_request",
        "proposition": store.display(needs_user.contradiction.proposition),
        "negation": store.display(needs_user.contradiction.negation),
        "candidates": candidates,
    }


class _Handler(socketserver.StreamRequestHandler):
    def _send(self, obj: dict) -> None:
        self.wfile.write((json.dumps(obj, sort_keys=True) + "\n").encode("utf-8"))
        self.wfile.flush()

    def _read(self) -> Optional[dict]:
        line = self.rfile.readline()
        if not line:
            return None
        try:
            msg = json.loads(line.decode("utf-8"))
        except ValueError as exc:
            raise ProtocolViolation(f"bad message: {exc}") from None
        if not isinstance(msg, dict) or "op" not in msg:
            raise ProtocolViolation("messages must be objects with an 'op' field")
        return msg

    def _dialog(self, needs_user: NeedsUser) -> list[TermId]:
        lookup = {session_label: info.tid
                  for info in needs_user.candidates
                  for session_label in (self.session.store.display(info.tid),)}
        by_index = {self.session.engine.wff_index.get(info.tid): info.tid
                    for info in needs_user.candidates}
        while True:
            self._send(_candidate_payload(self.session, needs_user))
            msg = self._read()
            if msg is None or msg.get("op") != "revision_choice":
                raise ProtocolViolation("expected revision_choice")
            chosen: list[TermId] = []
            for item in msg.get("retract", ()):
                if isinstance(item, int) and item in by_index:
                    chosen.append(by_index[item])
                elif isinstance(item, str) and item in lookup:
                    chosen.append(lookup[item])
            if chosen:
                return chosen
            self._send({"op": "error", "message": "invalid revision choice, try again"})

    def _wff_json(self, tid: TermId) -> dict:
        return {
            "index": self.session.engine.wff_index.get(tid),
            "text": self.session.store.display(tid),
            "asserted": self.session.engine.is_asserted(tid),
        }

    def _stream_events(self, events: list[Event]) -> None:
        for ev in events:
            if ev.kind == "derive":
                self._send({"op": "event", "kind": "derive", "wff": self._wff_json(ev.data["term"])})
            elif ev.kind == "act":
                self._send({"op": "event", "kind": "act",
                            "text": self.session.store.display(ev.data["term"])})
            elif ev.kind == "act_error":
                self._send({"op": "event", "kind": "act_error", "text": ev.data["message"]})
            elif ev.kind == "contradiction":
                self._send({"op": "event", "kind": "contradiction",
                            "p": self._wff_json(ev.data["p"]),
                            "n": self._wff_json(ev.data["n"])})
            elif ev.kind == "revision":
                report = ev.data["report"]
                for h in report.retracted:
                    self._send({"op": "event", "kind": "retract", "mode": report.mode,
                                "wff": self._wff_json(h)})
                for d in report.dropped:
                    self._send({"op": "event", "kind": "drop", "wff": self._wff_json(d)})
            elif ev.kind == "retract":
                report = ev.data["report"]
                self._send({"op": "event", "kind": "retract", "mode": "manual",
                            "wff": self._wff_json(report.removed)})
                for d in report.dropped:
                    if d != report.removed:
                        self._send({"op": "event", "kind": "drop", "wff": self._wff_json(d)})
            elif ev.kind == "revision_error":
                self._send({"op": "event", "kind": "revision_error", "text": ev.data["message"]})

    def _finish_command(self, resp: Response) -> None:
        self._stream_events(resp.events)
        if resp.error:
            self._send({"op": "error", "message": resp.error, "lines": resp.lines})
            return
        if resp.kind == "query" and resp.ask is not None:
            answers = []
            for ans in resp.ask.answers:
                answers.append({
                    "index": self.session.engine.wff_index.get(ans.instance),
                    "text": self.session.store.display(ans.instance),
                    "bindings": {self.session.store.functor(v):
                                 self.session.store.display(t)
                                 for v, t in ans.substitution.items()},
                    "supports": [sorted(self.session.engine.label(h) for h in rec.origin_set)
                                 for rec in ans.records],
                })
            self._send({"op": "answers", "answers": answers, "lines": resp.lines})
            return
        asserted = [self._wff_json(ev.data["term"]) for ev in resp.events
                    if ev.kind == "assert"]
        self._send({"op": "ok", "wffs": asserted, "lines": resp.lines})

    def handle(self) -> None:
        self.session = Session(mode=self.server.mode, expert=self.server.expert,
                               dialog=self._dialog)
        try:
            while True:
                msg = self._read()
                if msg is None:
                    return
                op = msg.get("op")
                if op in ("tell", "ask", "directive"):
                    text = msg.get("text", "")
                    resp = self.session.execute(text)
                    self._finish_command(resp)
                elif op == "graph":
                    graph = self.session.engine.graph_export()
                    self._send({"op": "graph", **graph})
                else:
                    raise ProtocolViolation(f"unknown op {op!r}")
        except ProtocolViolation as exc:
            try:
                self._send({"op": "error", "message": str(exc)})
            except OSError:
                pass
        except (ConnectionError, OSError):
            pass


class EngineServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str = "127.0.0.1", port: int = 7311,
                 mode: str = "auto", expert: bool = False):
        super().__init__((host, port), _Handler)
        self.mode = mode
        self.expert = expert

    @property
    def port(self) -> int:
        return self.server_address[1]


def serve(host: str = "127.0.0.1", port: int = 7311, mode: str = "auto",
          expert: bool = False) -> None:
    with EngineServer(host, port, mode=mode, expert=expert) as server:
        print(f"listening on {host}:{server.port}")
        server.serve_forever()
