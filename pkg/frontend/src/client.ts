/**
 * Protocol client: one command in flight at a time, strictly in order.
 *
 * While the server is waiting on a revision_choice the current command is
 * suspended; anything submitted meanwhile queues up behind it, which is what
 * lets the UI block cleanly until the user decides.
 */

import {
  AnswerInfo,
  ClientMessage,
  EventMessage,
  GraphMessage,
  RevisionRequestMessage,
  ServerMessage,
  WffInfo,
  decodeServerMessage,
  encodeClientMessage,
} from "./protocol.js";
import { LineTransport } from "./transport.js";

export interface CommandOutcome {
  kind: "ok" | "answers" | "error";
  lines: string[];
  wffs: WffInfo[];
  answers: AnswerInfo[];
  events: EventMessage[];
  errorMessage?: string;
}

interface Pending {
  message: ClientMessage;
  events: EventMessage[];
  resolveCommand?: (outcome: CommandOutcome) => void;
  resolveGraph?: (graph: GraphMessage) => void;
  reject: (err: Error) => void;
}

export class EngineClient {
  private queue: Pending[] = [];
  private inflight: Pending | null = null;
  private revision: RevisionRequestMessage | null = null;
  private eventHandlers: Array<(ev: EventMessage) => void> = [];
  private revisionHandlers: Array<(req: RevisionRequestMessage) => void> = [];
  private revisionRejections: Array<(message: string) => void> = [];
  private closeHandlers: Array<() => void> = [];
  private closed = false;

  constructor(private transport: LineTransport) {
    transport.onLine((line) => this.handleLine(line));
    transport.onClose(() => this.handleClose());
  }

  // -- public surface -------------------------------------------------------

  tell(text: string): Promise<CommandOutcome> {
    return this.enqueueCommand({ op: "tell", text });
  }

  ask(text: string): Promise<CommandOutcome> {
    return this.enqueueCommand({ op: "ask", text });
  }

  directive(text: string): Promise<CommandOutcome> {
    return this.enqueueCommand({ op: "directive", text });
  }

  requestGraph(): Promise<GraphMessage> {
    return new Promise((resolve, reject) => {
      this.queue.push({ message: { op: "graph" }, events: [], resolveGraph: resolve, reject });
      this.pump();
    });
  }

  get revisionPending(): RevisionRequestMessage | null {
    return this.revision;
  }

  submitRevision(retract: Array<number | string>): void {
    if (!this.revision) {
      throw new Error("no revision request is pending");
    }
    this.transport.send(encodeClientMessage({ op: "revision_choice", retract }));
  }

  onEvent(handler: (ev: EventMessage) => void): void {
    this.eventHandlers.push(handler);
  }

  onRevisionRequest(handler: (req: RevisionRequestMessage) => void): void {
    this.revisionHandlers.push(handler);
  }

  onRevisionRejected(handler: (message: string) => void): void {
    this.revisionRejections.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.transport.close();
  }

  // -- internals ---------------------------------------------------------------

  private enqueueCommand(message: ClientMessage): Promise<CommandOutcome> {
    return new Promise((resolve, reject) => {
      this.queue.push({ message, events: [], resolveCommand: resolve, reject });
      this.pump();
    });
  }

  private pump(): void {
    if (this.closed || this.inflight || this.revision) return;
    const next = this.queue.shift();
    if (!next) return;
    this.inflight = next;
    this.transport.send(encodeClientMessage(next.message));
  }

  private handleLine(line: string): void {
    let msg: ServerMessage;
    try {
      msg = decodeServerMessage(line);
    } catch (err) {
      this.failAll(err instanceof Error ? err : new Error(String(err)));
      return;
    }
    switch (msg.op) {
      case "event": {
        if (this.inflight) this.inflight.events.push(msg);
        for (const handler of this.eventHandlers) handler(msg);
        return;
      }
      case "revision_request": {
        this.revision = msg;
        for (const handler of this.revisionHandlers) handler(msg);
        return;
      }
      case "graph": {
        const pending = this.inflight;
        this.inflight = null;
        pending?.resolveGraph?.(msg);
        this.pump();
        return;
      }
      case "error": {
        if (this.revision) {
          // feedback on an invalid choice; a fresh request follows
          for (const handler of this.revisionRejections) handler(msg.message);
          return;
        }
        this.finishCommand({
          kind: "error",
          lines: msg.lines ?? [],
          wffs: [],
          answers: [],
          events: this.inflight?.events ?? [],
          errorMessage: msg.message,
        });
        return;
      }
      case "ok": {
        this.revision = null;
        this.finishCommand({
          kind: "ok",
          lines: msg.lines,
          wffs: msg.wffs,
          answers: [],
          events: this.inflight?.events ?? [],
        });
        return;
      }
      case "answers": {
        this.revision = null;
        this.finishCommand({
          kind: "answers",
          lines: msg.lines,
          wffs: [],
          answers: msg.answers,
          events: this.inflight?.events ?? [],
        });
        return;
      }
    }
  }

  private finishCommand(outcome: CommandOutcome): void {
    const pending = this.inflight;
    this.inflight = null;
    pending?.resolveCommand?.(outcome);
    this.pump();
  }

  private handleClose(): void {
    this.closed = true;
    this.failAll(new Error("connection closed"));
    for (const handler of this.closeHandlers) handler();
  }

  private failAll(err: Error): void {
    const pendings = this.inflight ? [this.inflight, ...this.queue] : [...this.queue];
    this.inflight = null;
    this.queue = [];
    for (const p of pendings) p.reject(err);
  }
}
