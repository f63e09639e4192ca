/**
 * Wire protocol types and codecs (see PROTOCOL.md at the repository root).
 *
 * Every message is one JSON object per line with an `op` field. The console
 * is a pure protocol client: nothing in here interprets the logic, it only
 * shapes what the server said.
 */

export interface WffInfo {
  index: number | null;
  text: string;
  asserted: boolean;
}

export interface AnswerInfo {
  index: number | null;
  text: string;
  bindings: Record<string, string>;
  supports: string[][];
}

export interface RevisionCandidate {
  index: number | null;
  text: string;
  sources: string[];
  origin_sets: string[][];
  side: string;
}

export interface GraphNode {
  id: number;
  functor: string;
  display: string;
  asserted: boolean;
  hypothesis: boolean;
}

export interface GraphEdge {
  from: number;
  to: number;
  pos: number;
}

export interface OkMessage {
  op: "ok";
  wffs: WffInfo[];
  lines: string[];
}

export interface AnswersMessage {
  op: "answers";
  answers: AnswerInfo[];
  lines: string[];
}

export interface ErrorMessage {
  op: "error";
  message: string;
  lines?: string[];
}

export interface EventMessage {
  op: "event";
  kind: string;
  text?: string;
  wff?: WffInfo;
  p?: WffInfo;
  n?: WffInfo;
  mode?: string;
}

export interface RevisionRequestMessage {
  op: "revision_request";
  proposition: string;
  negation: string;
  candidates: RevisionCandidate[];
}

export interface GraphMessage {
  op: "graph";
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export type ServerMessage =
  | OkMessage
  | AnswersMessage
  | ErrorMessage
  | EventMessage
  | RevisionRequestMessage
  | GraphMessage;

export type ClientMessage =
  | { op: "tell"; text: string }
  | { op: "ask"; text: string }
  | { op: "directive"; text: string }
  | { op: "revision_choice"; retract: Array<number | string> }
  | { op: "graph" };

const SERVER_OPS = new Set(["ok", "answers", "error", "event", "revision_request", "graph"]);

export class ProtocolError extends Error {}

export function decodeServerMessage(line: string): ServerMessage {
  let parsed: unknown;
  try {
    parsed = JSON.parse(line);
  } catch (err) {
    throw new ProtocolError(`unparseable server line: ${line}`);
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    throw new ProtocolError(`server message is not an object: ${line}`);
  }
  const op = (parsed as { op?: unknown }).op;
  if (typeof op !== "string" || !SERVER_OPS.has(op)) {
    throw new ProtocolError(`unknown server op: ${String(op)}`);
  }
  return parsed as ServerMessage;
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}
