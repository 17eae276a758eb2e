// Connection lifecycle: join the local bikers on open, forward their
// pedals, rejoin with the same ids after a drop, retry with a banner
// instead of crashing when the bridge or engine is down.

import {
  encodeClientMessage,
  parseServerLine,
  type ServerMessage,
  type StateMessage,
} from "./protocol.js";

export const MAX_LOCAL_BIKERS = 4;

export type ConnectionState = "connecting" | "live" | "retrying";

export interface Transport {
  send(data: string): void;
  close(): void;
}

export interface TransportHandlers {
  onOpen(): void;
  onLine(line: string): void;
  onClose(): void;
}

export type TransportFactory = (handlers: TransportHandlers) => Transport;

export interface SessionEvents {
  onState?(state: StateMessage): void;
  onError?(message: string): void;
  onConnection?(state: ConnectionState): void;
}

export class ConsoleSession {
  state: ConnectionState = "connecting";
  private transport: Transport | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;

  constructor(
    private readonly factory: TransportFactory,
    readonly bikerIds: number[],
    private readonly events: SessionEvents = {},
    private readonly retryMs = 1000,
  ) {
    if (bikerIds.length > MAX_LOCAL_BIKERS) {
      throw new Error(`at most ${MAX_LOCAL_BIKERS} local bikers`);
    }
  }

  start(): void {
    this.stopped = false;
    this.connect();
  }

  private connect(): void {
    this.setState("connecting");
    this.transport = this.factory({
      onOpen: () => {
        this.setState("live");
        for (const biker of this.bikerIds) {
          this.send({ type: "join", biker });
        }
      },
      onLine: (line) => this.handleLine(line),
      onClose: () => this.scheduleRetry(),
    });
  }

  private handleLine(line: string): void {
    const msg: ServerMessage | null = parseServerLine(line);
    if (msg === null) {
      // malformed snapshot: log and keep the last good frame
      console.warn("unparseable server line", line);
      return;
    }
    if (msg.type === "error") {
      this.events.onError?.(msg.message);
    } else {
      this.events.onState?.(msg);
    }
  }

  private scheduleRetry(): void {
    this.transport = null;
    if (this.stopped) return;
    this.setState("retrying");
    this.retryTimer = setTimeout(() => this.connect(), this.retryMs);
  }

  private setState(state: ConnectionState): void {
    this.state = state;
    this.events.onConnection?.(state);
  }

  pedal(biker: number): void {
    this.send({ type: "pedal", biker });
  }

  leave(biker: number): void {
    this.send({ type: "leave", biker });
  }

  private send(msg: Parameters<typeof encodeClientMessage>[0]): void {
    if (this.transport === null || this.state !== "live") return;
    this.transport.send(encodeClientMessage(msg));
  }

  stop(): void {
    this.stopped = true;
    if (this.retryTimer !== null) clearTimeout(this.retryTimer);
    this.transport?.close();
    this.transport = null;
  }
}

// Browser transport: WebSocket to the bridge, one JSON message per frame.
export function webSocketTransport(url: string): TransportFactory {
  return (handlers) => {
    const socket = new WebSocket(url);
    socket.addEventListener("open", () => handlers.onOpen());
    socket.addEventListener("message", (event) => {
      for (const line of String(event.data).split("\n")) {
        if (line.trim()) handlers.onLine(line);
      }
    });
    socket.addEventListener("close", () => handlers.onClose());
    socket.addEventListener("error", () => {
      /* close follows; the retry banner covers it */
    });
    return {
      send: (data) => {
        if (socket.readyState === WebSocket.OPEN) socket.send(data);
      },
      close: () => socket.close(),
    };
  };
}
