// End to end against the real thing: the support script boots the demo
// pipeline and gateway in a child process, and the dashboard talks to
// it over actual HTTP. Excluded from the unit run (`npm run test:unit`).

import { ChildProcess, spawn } from "node:child_process";
import { resolve } from "node:path";
import { createInterface } from "node:readline";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { getServices, getTraps, postConfig, setBaseUrl } from "../src/api.js";
import { createApp } from "../src/app.js";

let child: ChildProcess | null = null;

function bootGateway(): Promise<string> {
    // vitest runs with the project root as cwd
    const script = resolve(process.cwd(), "test/support/live_gateway.py");
    child = spawn("python3", [script], { stdio: ["ignore", "pipe", "inherit"] });
    const proc = child;
    return new Promise<string>((resolve, reject) => {
        const timer = setTimeout(
            () => reject(new Error("gateway did not come up in time")),
            25000,
        );
        createInterface({ input: proc.stdout! }).on("line", (line) => {
            try {
                const parsed = JSON.parse(line) as { url: string };
                clearTimeout(timer);
                resolve(parsed.url);
            } catch {
                // boot chatter; keep listening
            }
        });
        proc.on("exit", (code) => {
            clearTimeout(timer);
            reject(new Error(`gateway exited early with code ${code}`));
        });
    });
}

beforeAll(async () => {
    setBaseUrl(await bootGateway());
}, 30000);

afterAll(() => {
    child?.kill("SIGTERM");
});

describe("live demo pipeline", () => {
    it("serves five services over HTTP, all up", async () => {
        const payload = await getServices();
        expect(payload.services).toHaveLength(5);
        expect(payload.services.map((s) => s.status)).toEqual([
            "up",
            "up",
            "up",
            "up",
            "up",
        ]);
        expect(payload.pipelineStatus).toBe("up");
    });

    it("flips a stopped service to down within one poll", async () => {
        const root = document.createElement("div");
        document.body.appendChild(root);
        const app = createApp(root);
        await app.pollServices();
        const rowFor = (index: number) =>
            root.querySelector<HTMLTableRowElement>(
                `#services tbody tr[data-index="${index}"]`,
            )!;
        expect(rowFor(4).querySelector(".pill")!.textContent).toBe("up");

        const result = await postConfig(4, { serviceStatus: "down" });
        expect(result.status).toBe("noError");

        await app.pollServices(); // the next poll is enough
        expect(rowFor(4).querySelector(".pill")!.textContent).toBe("down");
        expect(rowFor(4).querySelector(".pill")!.className).toContain("status-down");
        expect(root.querySelector("#pipeline-pill")!.textContent).toBe(
            "pipeline down",
        );

        // leave the pipeline as found
        await postConfig(4, { serviceStatus: "up" });
        await app.pollServices();
        expect(rowFor(4).querySelector(".pill")!.textContent).toBe("up");
        root.remove();
    }, 20000);

    it("logs the startup notifications newest-first", async () => {
        const payload = await getTraps();
        expect(payload.traps.length).toBeGreaterThanOrEqual(5);
        const root = document.createElement("div");
        document.body.appendChild(root);
        const app = createApp(root);
        await app.pollTraps();
        const firstRow = root.querySelector<HTMLTableRowElement>("#traps tbody tr")!;
        const last = payload.traps[payload.traps.length - 1];
        expect(firstRow.cells[1].textContent).toBe("serviceStatusChange");
        // newest-first means the top row is at least as new as the
        // last arrival we fetched before polling
        expect(firstRow.cells[0].textContent! >= last.receivedAt).toBe(true);
        root.remove();
    });
});
