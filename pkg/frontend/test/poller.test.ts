// The poller contract: at most one request in flight, stale data stays
// on screen, repeated failures flag the connection as lost.

import { describe, expect, it } from "vitest";
import { PollState, Poller } from "../src/poller.js";

function deferred<T>(): { promise: Promise<T>; resolve: (v: T) => void } {
    let resolve!: (v: T) => void;
    const promise = new Promise<T>((r) => {
        resolve = r;
    });
    return { promise, resolve };
}

describe("Poller", () => {
    it("coalesces overlapping ticks into one request", async () => {
        let calls = 0;
        const gate = deferred<number>();
        const poller = new Poller<number>(
            () => {
                calls += 1;
                return gate.promise;
            },
            () => undefined,
        );
        const first = poller.tick();
        const second = poller.tick(); // overlaps; must not fetch again
        const third = poller.tick();
        gate.resolve(7);
        await Promise.all([first, second, third]);
        expect(calls).toBe(1);
        expect(poller.snapshot.data).toBe(7);
    });

    it("keeps the last good data and marks it stale on failure", async () => {
        const answers: Array<() => number> = [
            () => 1,
            () => {
                throw new Error("boom");
            },
        ];
        const states: PollState<number>[] = [];
        const poller = new Poller<number>(
            async () => answers[Math.min(states.length, answers.length - 1)](),
            (state) => states.push(state),
        );
        await poller.tick();
        expect(states[0]).toEqual({ data: 1, stale: false, lost: false, lastError: null });
        await poller.tick();
        expect(states[1].data).toBe(1); // old data survives the failure
        expect(states[1].stale).toBe(true);
        expect(states[1].lost).toBe(false);
        expect(states[1].lastError).toBe("boom");
    });

    it("declares the connection lost after three straight failures", async () => {
        let fail = false;
        const poller = new Poller<number>(
            async () => {
                if (fail) {
                    throw new Error("gone");
                }
                return 5;
            },
            () => undefined,
        );
        await poller.tick();
        fail = true;
        await poller.tick();
        await poller.tick();
        expect(poller.snapshot.lost).toBe(false);
        await poller.tick();
        expect(poller.snapshot.lost).toBe(true);
        // recovery clears everything at once
        fail = false;
        await poller.tick();
        expect(poller.snapshot).toEqual({
            data: 5,
            stale: false,
            lost: false,
            lastError: null,
        });
    });
});
