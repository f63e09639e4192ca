import { describe, expect, it } from "vitest";

import { decodeServerMessage, encodeClientMessage, ProtocolError } from "../src/protocol.js";

describe("codec", () => {
  it("decodes every server op", () => {
    const lines = [
      { op: "ok", wffs: [], lines: [] },
      { op: "answers", answers: [], lines: [] },
      { op: "error", message: "nope" },
      { op: "event", kind: "act", text: "cross(street1)" },
      { op: "revision_request", proposition: "p", negation: "~p", candidates: [] },
      { op: "graph", nodes: [], edges: [] },
    ];
    for (const msg of lines) {
      expect(decodeServerMessage(JSON.stringify(msg)).op).toBe(msg.op);
    }
  });

  it("rejects junk and unknown ops", () => {
    expect(() => decodeServerMessage("{nope")).toThrow(ProtocolError);
    expect(() => decodeServerMessage("[1,2]")).toThrow(ProtocolError);
    expect(() => decodeServerMessage('{"op":"mystery"}')).toThrow(ProtocolError);
  });

  it("encodes client messages as single JSON lines", () => {
    const line = encodeClientMessage({ op: "tell", text: "fun(learning)." });
    expect(JSON.parse(line)).toEqual({ op: "tell", text: "fun(learning)." });
    expect(line).not.toContain("\n");
  });
});
