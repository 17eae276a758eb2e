// WebSocket-to-TCP bridge plus static file server for the console.
//
// Browsers cannot open raw TCP sockets, so each WebSocket client gets its
// own TCP connection to the engine and lines are relayed verbatim in both
// directions; the engine keeps seeing one connection per client, which
// preserves its per-connection ownership and auto-leave behaviour.
//
//   node dist-bridge/bridge.js [--engine 127.0.0.1:7077] [--http 8080]
import http from "node:http";
import net from "node:net";
import { readFile } from "node:fs/promises";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { WebSocketServer, WebSocket } from "ws";
const ROOT = path.join(path.dirname(fileURLToPath(import.meta.url)), "..");
const CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
};
export async function startBridge(engineHost, enginePort, httpPort) {
    const server = http.createServer(async (req, res) => {
        const url = (req.url ?? "/").split("?")[0];
        const file = url === "/" ? "/index.html" : url;
        const full = path.normalize(path.join(ROOT, file));
        if (!full.startsWith(ROOT)) {
            res.writeHead(403).end();
            return;
        }
        try {
            const body = await readFile(full);
            res.writeHead(200, {
                "content-type": CONTENT_TYPES[path.extname(full)] ?? "application/octet-stream",
            });
            res.end(body);
        }
        catch {
            res.writeHead(404).end("not found");
        }
    });
    const wss = new WebSocketServer({ server, path: "/ws" });
    wss.on("connection", (ws) => {
        const engine = net.createConnection({ host: engineHost, port: enginePort });
        let pending = Buffer.alloc(0);
        engine.on("data", (chunk) => {
            pending = Buffer.concat([pending, chunk]);
            let idx;
            while ((idx = pending.indexOf(0x0a)) >= 0) {
                const line = pending.subarray(0, idx).toString();
                pending = pending.subarray(idx + 1);
                if (line.trim() && ws.readyState === WebSocket.OPEN)
                    ws.send(line);
            }
        });
        engine.on("close", () => ws.close());
        engine.on("error", () => ws.close());
        ws.on("message", (data) => {
            const text = data.toString();
            engine.write(text.endsWith("\n") ? text : text + "\n");
        });
        ws.on("close", () => engine.destroy());
        ws.on("error", () => engine.destroy());
    });
    await new Promise((resolve) => server.listen(httpPort, resolve));
    const address = server.address();
    const actualPort = typeof address === "object" && address !== null ? address.port : httpPort;
    return {
        httpPort: actualPort,
        close: () => new Promise((resolve) => {
            for (const client of wss.clients)
                client.terminate();
            wss.close(() => server.close(() => resolve()));
        }),
    };
}
function parseArgs(argv) {
    const out = { engine: "127.0.0.1:7077", http: 8080 };
    for (let i = 0; i < argv.length; i += 1) {
        if (argv[i] === "--engine")
            out.engine = argv[++i];
        else if (argv[i] === "--http")
            out.http = Number(argv[++i]);
    }
    return out;
}
const isMain = process.argv[1] !== undefined &&
    import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;
if (isMain) {
    const args = parseArgs(process.argv.slice(2));
    const [host, port] = args.engine.split(":");
    startBridge(host, Number(port), args.http).then((bridge) => {
        console.log(`console on http://127.0.0.1:${bridge.httpPort}/ ` +
            `(engine at ${args.engine})`);
    });
}
