/**
 * DOM console: transcript pane, command input, graph canvas, revision dialog,
 * reconnect banner. Every piece of text shown here came from a server
 * message; the only client-side computation is layout geometry.
 */

import { EngineClient } from "./client.js";
import { GraphModel } from "./graph.js";
import { EventMessage, RevisionCandidate, RevisionRequestMessage } from "./protocol.js";

export class Console {
  private graph = new GraphModel();
  private transcript: HTMLElement;
  private input: HTMLInputElement;
  private canvas: HTMLCanvasElement;
  private dialog: HTMLElement;
  private banner: HTMLElement;

  constructor(private root: HTMLElement, private client: EngineClient,
              private doc: Document = document) {
    this.root.innerHTML = "";
    this.banner = this.el("div", "banner");
    this.banner.style.display = "none";
    this.transcript = this.el("div", "transcript");
    this.input = this.doc.createElement("input");
    this.input.className = "command";
    this.input.placeholder = "wff.  wff!  wff?  or %directive";
    this.canvas = this.doc.createElement("canvas");
    this.canvas.className = "graph";
    this.canvas.width = 640;
    this.canvas.height = 480;
    this.dialog = this.el("div", "revision-dialog");
    this.dialog.style.display = "none";

    const left = this.el("div", "left");
    left.append(this.transcript, this.input);
    const right = this.el("div", "right");
    right.append(this.canvas);
    this.root.append(this.banner, left, right, this.dialog);

    this.input.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter" && this.input.value.trim()) {
        void this.submit(this.input.value.trim());
        this.input.value = "";
      }
    });
    client.onEvent((ev) => this.showEvent(ev));
    client.onRevisionRequest((req) => this.openDialog(req));
    client.onRevisionRejected((message) => this.appendLine(`ERROR: ${message}`, "error"));
    client.onClose(() => this.showBanner("connection lost; reload to reconnect"));
  }

  private el(tag: string, className: string): HTMLElement {
    const node = this.doc.createElement(tag);
    node.className = className;
    return node;
  }

  private appendLine(text: string, className = "line"): void {
    const line = this.el("div", className);
    line.textContent = text;
    this.transcript.append(line);
    this.transcript.scrollTop = this.transcript.scrollHeight;
  }

  private showEvent(ev: EventMessage): void {
    if (ev.kind === "act" && ev.text) this.appendLine(`ACT: ${ev.text}`, "act");
    if (ev.kind === "act_error" && ev.text) this.appendLine(`ACT-ERROR: ${ev.text}`, "error");
  }

  async submit(text: string): Promise<void> {
    this.appendLine(`> ${text}`, "echo");
    const op = text.startsWith("%") ? "directive" : text.endsWith("?") ? "ask" : "tell";
    try {
      const outcome = op === "ask" ? await this.client.ask(text)
        : op === "directive" ? await this.client.directive(text)
        : await this.client.tell(text);
      for (const line of outcome.lines) this.appendLine(line);
      if (outcome.kind === "error" && outcome.errorMessage && !outcome.lines.length) {
        this.appendLine(outcome.errorMessage, "error");
      }
      await this.refreshGraph();
    } catch (err) {
      this.appendLine(String(err), "error");
    }
  }

  async refreshGraph(): Promise<void> {
    const message = await this.client.requestGraph();
    this.graph.apply(message);
    this.graph.layout();
    this.draw();
  }

  private draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { minX, minY, maxX, maxY } = this.graph.bounds();
    const pad = 40;
    const sx = (this.canvas.width - 2 * pad) / Math.max(1e-6, maxX - minX);
    const sy = (this.canvas.height - 2 * pad) / Math.max(1e-6, maxY - minY);
    const px = (x: number) => pad + (x - minX) * sx;
    const py = (y: number) => pad + (y - minY) * sy;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.strokeStyle = "#888";
    ctx.font = "11px sans-serif";
    for (const edge of this.graph.edges) {
      const a = this.graph.node(edge.from);
      const b = this.graph.node(edge.to);
      if (!a || !b) continue;
      ctx.beginPath();
      ctx.moveTo(px(a.x), py(a.y));
      ctx.lineTo(px(b.x), py(b.y));
      ctx.stroke();
      ctx.fillStyle = "#888";
      ctx.fillText(String(edge.pos), (px(a.x) + px(b.x)) / 2, (py(a.y) + py(b.y)) / 2);
    }
    for (const node of this.graph.nodes.values()) {
      ctx.beginPath();
      const r = node.compound ? 9 : 6;
      ctx.arc(px(node.x), py(node.y), r, 0, 2 * Math.PI);
      ctx.fillStyle = node.hypothesis ? "#2b6cb0" : node.asserted ? "#63b3ed" : "#fff";
      ctx.fill();
      ctx.strokeStyle = node.compound ? "#1a365d" : "#718096";
      ctx.stroke();
      ctx.fillStyle = "#222";
      ctx.fillText(node.display, px(node.x) + r + 2, py(node.y) + 3);
    }
  }

  private openDialog(req: RevisionRequestMessage): void {
    this.input.disabled = true;  // block further commands until resolved
    this.dialog.innerHTML = "";
    this.dialog.style.display = "block";
    const title = this.el("div", "dialog-title");
    title.textContent = `Contradiction: ${req.proposition} and ${req.negation} - retract which?`;
    this.dialog.append(title);
    const boxes: Array<{ box: HTMLInputElement; candidate: RevisionCandidate }> = [];
    for (const candidate of req.candidates) {
      const row = this.el("label", "candidate");
      const box = this.doc.createElement("input");
      box.type = "checkbox";
      const sources = candidate.sources.length
        ? ` [sources: ${candidate.sources.join(", ")}]` : "";
      const supports = candidate.origin_sets
        .map((oset) => `{${oset.join(", ")}}`).join(" ");
      const label = this.doc.createElement("span");
      label.textContent =
        ` ${candidate.text}${sources} supports ${candidate.side} via ${supports}`;
      row.append(box, label);
      this.dialog.append(row);
      boxes.push({ box, candidate });
    }
    const submit = this.doc.createElement("button");
    submit.textContent = "Retract selected";
    submit.addEventListener("click", () => {
      const chosen = boxes.filter((b) => b.box.checked)
        .map((b) => b.candidate.index ?? b.candidate.text);
      if (!chosen.length) return;
      this.dialog.style.display = "none";
      this.input.disabled = false;
      this.client.submitRevision(chosen);
    });
    this.dialog.append(submit);
  }

  private showBanner(text: string): void {
    this.banner.textContent = text;
    this.banner.style.display = "block";
  }
}
