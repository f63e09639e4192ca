import json
import socket
import threading

import pytest

from sneng.server import EngineServer

SIMPSONS = [
    "fun(learning).", "~fun(spitting).",
    "Source(Lisa, fun(learning)).", "Source(Lisa, ~fun(spitting)).",
    "Source(Bart, fun(spitting)).",
    "Sgreater(Lisa,Marge).", "Sgreater(Marge, Bart).", "Sgreater(Bart,Homer).",
    "Greater(fun(learning),~fun(spitting)).",
]


class Client:
    def __init__(self, port):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=10)
        self.file = self.sock.makefile("rw", encoding="utf-8")

    def send(self, obj):
        self.file.write(json.dumps(obj) + "\n")
        self.file.flush()

    def recv(self):
        line = self.file.readline()
        return json.loads(line) if line else None

    def recv_until(self, *ops):
        seen = []
        while True:
            msg = self.recv()
            if msg is None:
                return seen, None
            seen.append(msg)
            if msg["op"] in ops:
                return seen, msg

    def close(self):
        self.sock.close()


@pytest.fixture()
def server():
    srv = EngineServer(port=0, mode="interactive")
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def test_tell_names_the_wff(server):
    c = Client(server.port)
    c.send({"op": "tell", "text": "fun(learning)."})
    _, ok = c.recv_until("ok", "error")
    assert ok["op"] == "ok"
    assert ok["wffs"] == [{"index": 1, "text": "fun(learning)", "asserted": True}]
    c.close()


def test_ask_returns_bindings(server):
    c = Client(server.port)
    c.send({"op": "tell", "text": "fun(learning)."})
    c.recv_until("ok", "error")
    c.send({"op": "ask", "text": "fun(x)?"})
    _, msg = c.recv_until("answers", "error")
    assert msg["op"] == "answers"
    assert msg["answers"][0]["bindings"] == {"x": "learning"}
    c.close()


def test_interactive_revision_round_trip(server):
    c = Client(server.port)
    for line in SIMPSONS:
        c.send({"op": "tell", "text": line})
        c.recv_until("ok", "error")
    c.send({"op": "tell", "text": "fun(spitting)."})
    msg = c.recv()
    assert msg["op"] == "revision_request"
    texts = [cand["text"] for cand in msg["candidates"]]
    assert set(texts) == {"fun(spitting)", "~fun(spitting)"}
    by_text = {cand["text"]: cand for cand in msg["candidates"]}
    assert by_text["fun(spitting)"]["sources"] == ["Bart"]
    assert by_text["~fun(spitting)"]["sources"] == ["Lisa"]
    c.send({"op": "revision_choice", "retract": [by_text["fun(spitting)"]["index"]]})
    seen, ok = c.recv_until("ok", "error")
    assert ok["op"] == "ok"
    kinds = [m.get("kind") for m in seen if m["op"] == "event"]
    assert "retract" in kinds
    c.send({"op": "ask", "text": "fun(x)?"})
    _, msg = c.recv_until("answers", "error")
    assert [a["text"] for a in msg["answers"]] == ["fun(learning)"]
    c.close()


def test_invalid_choice_is_rerequested(server):
    c = Client(server.port)
    c.send({"op": "tell", "text": "q."})
    c.recv_until("ok", "error")
    c.send({"op": "tell", "text": "~q."})
    msg = c.recv()
    assert msg["op"] == "revision_request"
    c.send({"op": "revision_choice", "retract": []})
    err = c.recv()
    assert err["op"] == "error"
    again = c.recv()
    assert again["op"] == "revision_request"
    c.send({"op": "revision_choice", "retract": [again["candidates"][0]["index"]]})
    _, ok = c.recv_until("ok", "error")
    assert ok["op"] == "ok"
    c.close()


def test_graph_message_matches_simpsons_node_count(server):
    c = Client(server.port)
    for line in SIMPSONS:
        c.send({"op": "tell", "text": line})
        c.recv_until("ok", "error")
    c.send({"op": "graph"})
    msg = c.recv()
    assert msg["op"] == "graph"
    assert len(msg["nodes"]) == 16
    hyp_flags = {n["display"]: n["hypothesis"] for n in msg["nodes"]}
    assert hyp_flags["fun(learning)"] and not hyp_flags["learning"]
    assert all({"from", "to", "pos"} <= set(e) for e in msg["edges"])
    c.close()


def test_acts_stream_as_events(server):
    c = Client(server.port)
    c.send({"op": "tell", "text": "whendo(green(light1), cross(street1))."})
    c.recv_until("ok", "error")
    c.send({"op": "tell", "text": "green(light1)!"})
    seen, ok = c.recv_until("ok", "error")
    acts = [m["text"] for m in seen if m["op"] == "event" and m.get("kind") == "act"]
    assert acts == ["cross(street1)"]
    c.close()


def test_protocol_violation_closes_with_error(server):
    c = Client(server.port)
    c.send({"op": "mystery"})
    msg = c.recv()
    assert msg["op"] == "error"
    assert c.recv() is None  # connection closed
    c.close()


def test_sessions_are_independent_per_connection(server):
    a, b = Client(server.port), Client(server.port)
    a.send({"op": "tell", "text": "secret(a)."})
    a.recv_until("ok", "error")
    b.send({"op": "ask", "text": "secret(x)?"})
    _, msg = b.recv_until("answers", "error")
    assert msg["answers"] == []
    a.close()
    b.close()
