/**
 * Browser entry point. The engine serves raw TCP lines, so point this at a
 * WebSocket bridge, e.g.:
 *
 *     sneng serve --port 7311 --mode interactive
 *     websocat --binary ws-l:127.0.0.1:8400 tcp:127.0.0.1:7311
 *
 * then open index.html?ws=ws://127.0.0.1:8400
 */

import { EngineClient } from "./client.js";
import { Console } from "./console.js";
import { WebSocketTransport } from "./transport.js";

const params = new URLSearchParams(window.location.search);
const url = params.get("ws") ?? "ws://127.0.0.1:8400";
const root = document.getElementById("console");
if (root) {
  const client = new EngineClient(new WebSocketTransport(url));
  const ui = new Console(root, client);
  void ui.refreshGraph();
}
