/**
 * Line transports. The protocol is plain newline-delimited JSON, so any
 * bidirectional line stream will do: a WebSocket (through a TCP bridge such
 * as websocat) in the browser, or an in-memory mock under test.
 */

export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export class WebSocketTransport implements LineTransport {
  private socket: WebSocket;
  private lineHandlers: Array<(line: string) => void> = [];
  private closeHandlers: Array<() => void> = [];
  private buffer = "";

  constructor(url: string) {
    this.socket = new WebSocket(url);
    this.socket.onmessage = (event) => {
      this.buffer += String(event.data);
      let cut;
      while ((cut = this.buffer.indexOf("\n")) >= 0) {
        const line = this.buffer.slice(0, cut);
        this.buffer = this.buffer.slice(cut + 1);
        if (line.trim()) {
          for (const handler of this.lineHandlers) handler(line);
        }
      }
    };
    this.socket.onclose = () => {
      for (const handler of this.closeHandlers) handler();
    };
  }

  send(line: string): void {
    this.socket.send(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.close();
  }
}

/** In-memory transport for tests; the test plays the server side. */
export class MockTransport implements LineTransport {
  sent: string[] = [];
  closed = false;
  private lineHandlers: Array<(line: string) => void> = [];
  private closeHandlers: Array<() => void> = [];
  private sendListener: ((line: string) => void) | null = null;

  send(line: string): void {
    this.sent.push(line);
    if (this.sendListener) this.sendListener(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.closed = true;
    this.dropConnection();
  }

  /** Test hooks. */
  feed(line: string): void {
    for (const handler of this.lineHandlers) handler(line);
  }

  onSend(listener: (line: string) => void): void {
    this.sendListener = listener;
  }

  dropConnection(): void {
    for (const handler of this.closeHandlers) handler();
  }
}
