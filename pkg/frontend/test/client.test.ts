import { describe, expect, it } from "vitest";

import { EngineClient } from "../src/client.js";
import { GraphModel } from "../src/graph.js";
import { EventMessage, RevisionRequestMessage } from "../src/protocol.js";
import { MockTransport } from "../src/transport.js";
import { FixtureServer, fixturePath } from "./fixtureserver.js";

const SCRIPT = [
  "fun(learning).", "~fun(spitting).",
  "Source(Lisa, fun(learning)).", "Source(Lisa, ~fun(spitting)).",
  "Source(Bart, fun(spitting)).",
  "Sgreater(Lisa,Marge).", "Sgreater(Marge, Bart).", "Sgreater(Bart,Homer).",
  "Greater(fun(learning),~fun(spitting)).",
];

describe("the recorded interactive revision flow", () => {
  it("completes end to end against the fixture server", async () => {
    const server = new FixtureServer(fixturePath("simpsons-flow.json"));
    const client = new EngineClient(server.transport);
    const dialogs: RevisionRequestMessage[] = [];
    client.onRevisionRequest((req) => dialogs.push(req));

    for (const line of SCRIPT) {
      const outcome = await client.tell(line);
      expect(outcome.kind).toBe("ok");
      expect(outcome.wffs).toHaveLength(1);
      expect(outcome.wffs[0].asserted).toBe(true);
    }

    const graphBefore = await client.requestGraph();
    expect(graphBefore.nodes).toHaveLength(16);

    // the contradiction suspends the tell and opens the dialog
    const pending = client.tell("fun(spitting).");
    expect(dialogs).toHaveLength(1);
    const request = dialogs[0];
    expect(request.proposition).toBe("fun(spitting)");
    expect(request.negation).toBe("~fun(spitting)");
    const byText = Object.fromEntries(request.candidates.map((c) => [c.text, c]));
    expect(byText["fun(spitting)"].sources).toEqual(["Bart"]);
    expect(byText["~fun(spitting)"].sources).toEqual(["Lisa"]);
    expect(client.revisionPending).not.toBeNull();

    client.submitRevision([byText["fun(spitting)"].index!]);
    const outcome = await pending;
    expect(outcome.kind).toBe("ok");
    expect(client.revisionPending).toBeNull();
    const kinds = outcome.events.map((ev) => ev.kind);
    expect(kinds).toContain("contradiction");
    expect(kinds).toContain("retract");

    // the post-state graph reflects the retraction
    const graphAfter = await client.requestGraph();
    expect(graphAfter.nodes).toHaveLength(16);
    const model = new GraphModel();
    model.apply(graphAfter);
    const spitting = model.byDisplay("fun(spitting)")!;
    expect(spitting.asserted).toBe(false);
    expect(spitting.hypothesis).toBe(false);
    expect(model.byDisplay("~fun(spitting)")!.asserted).toBe(true);

    const answers = await client.ask("fun(x)?");
    expect(answers.kind).toBe("answers");
    expect(answers.answers.map((a) => a.text)).toEqual(["fun(learning)"]);
    expect(answers.answers[0].bindings).toEqual({ x: "learning" });

    expect(server.finished).toBe(true);
  });
});

describe("command queueing", () => {
  it("sends one command at a time, in order", async () => {
    const transport = new MockTransport();
    const client = new EngineClient(transport);
    const first = client.tell("a.");
    const second = client.tell("b.");
    expect(transport.sent).toHaveLength(1);
    transport.feed(JSON.stringify({ op: "ok", wffs: [], lines: [] }));
    await first;
    expect(transport.sent).toHaveLength(2);
    transport.feed(JSON.stringify({ op: "ok", wffs: [], lines: [] }));
    await second;
    expect(transport.sent.map((l) => JSON.parse(l).text)).toEqual(["a.", "b."]);
  });

  it("blocks queued commands while a revision is pending", async () => {
    const transport = new MockTransport();
    const client = new EngineClient(transport);
    const suspended = client.tell("q.");
    transport.feed(JSON.stringify({
      op: "revision_request", proposition: "q", negation: "~q",
      candidates: [{ index: 1, text: "q", sources: [], origin_sets: [["q"]], side: "P" }],
    }));
    const queued = client.ask("r?");
    expect(transport.sent).toHaveLength(1); // the ask must wait
    client.submitRevision([1]);
    transport.feed(JSON.stringify({ op: "ok", wffs: [], lines: [] }));
    await suspended;
    expect(transport.sent).toHaveLength(3); // choice, then the queued ask
    expect(JSON.parse(transport.sent[2]).op).toBe("ask");
    transport.feed(JSON.stringify({ op: "answers", answers: [], lines: [] }));
    await queued;
  });

  it("re-prompts after an invalid revision choice", async () => {
    const transport = new MockTransport();
    const client = new EngineClient(transport);
    const rejections: string[] = [];
    const dialogs: RevisionRequestMessage[] = [];
    client.onRevisionRejected((m) => rejections.push(m));
    client.onRevisionRequest((r) => dialogs.push(r));
    const pending = client.tell("q.");
    const request = {
      op: "revision_request", proposition: "q", negation: "~q",
      candidates: [{ index: 1, text: "q", sources: [], origin_sets: [["q"]], side: "P" }],
    };
    transport.feed(JSON.stringify(request));
    client.submitRevision([]);
    transport.feed(JSON.stringify({ op: "error", message: "invalid revision choice, try again" }));
    transport.feed(JSON.stringify(request));
    expect(rejections).toEqual(["invalid revision choice, try again"]);
    expect(dialogs).toHaveLength(2);
    client.submitRevision([1]);
    transport.feed(JSON.stringify({ op: "ok", wffs: [], lines: [] }));
    await pending;
  });

  it("refuses to submit a choice when nothing is pending", () => {
    const client = new EngineClient(new MockTransport());
    expect(() => client.submitRevision([1])).toThrow(/no revision request/);
  });
});

describe("errors and connection loss", () => {
  it("renders protocol errors verbatim", async () => {
    const transport = new MockTransport();
    const client = new EngineClient(transport);
    const pending = client.tell("fun(");
    transport.feed(JSON.stringify({
      op: "error",
      message: "line 1, col 5: expected a wff",
      lines: ["SYNTAX ERROR: line 1, col 5: expected a wff"],
    }));
    const outcome = await pending;
    expect(outcome.kind).toBe("error");
    expect(outcome.errorMessage).toBe("line 1, col 5: expected a wff");
    expect(outcome.lines).toEqual(["SYNTAX ERROR: line 1, col 5: expected a wff"]);
  });

  it("streams act events to listeners", async () => {
    const transport = new MockTransport();
    const client = new EngineClient(transport);
    const events: EventMessage[] = [];
    client.onEvent((ev) => events.push(ev));
    const pending = client.tell("green(light1)!");
    transport.feed(JSON.stringify({ op: "event", kind: "act", text: "cross(street1)" }));
    transport.feed(JSON.stringify({ op: "ok", wffs: [], lines: [] }));
    const outcome = await pending;
    expect(events.map((e) => e.text)).toEqual(["cross(street1)"]);
    expect(outcome.events).toHaveLength(1);
  });

  it("rejects in-flight commands when the connection drops", async () => {
    const transport = new MockTransport();
    const client = new EngineClient(transport);
    let closed = false;
    client.onClose(() => (closed = true));
    const pending = client.tell("a.");
    transport.dropConnection();
    await expect(pending).rejects.toThrow(/connection closed/);
    expect(closed).toBe(true);
  });

  it("rejects everything on malformed server lines", async () => {
    const transport = new MockTransport();
    const client = new EngineClient(transport);
    const pending = client.tell("a.");
    transport.feed("this is not json");
    await expect(pending).rejects.toThrow(/unparseable/);
  });
});
