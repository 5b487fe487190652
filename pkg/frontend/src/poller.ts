// Polling is the only transport: no push channel, no websockets. One
// poller per endpoint, and overlapping ticks coalesce so at most one
// request is ever in flight no matter how slow the gateway gets.

export interface PollState<T> {
    data: T | null;
    // the last poll failed; whatever is on screen is old
    stale: boolean;
    // several polls in a row failed; we are backing off
    lost: boolean;
    lastError: string | null;
}

const LOST_AFTER = 3;
const MAX_BACKOFF_FACTOR = 8;

export class Poller<T> {
    private readonly fetchFn: () => Promise<T>;
    private readonly onUpdate: (state: PollState<T>) => void;
    private readonly intervalMs: number;

    private state: PollState<T> = { data: null, stale: false, lost: false, lastError: null };
    private failures = 0;
    private inFlight = false;
    private timer: ReturnType<typeof setTimeout> | null = null;
    private running = false;

    constructor(
        fetchFn: () => Promise<T>,
        onUpdate: (state: PollState<T>) => void,
        intervalMs = 2000,
    ) {
        this.fetchFn = fetchFn;
        this.onUpdate = onUpdate;
        this.intervalMs = intervalMs;
    }

    start(): void {
        if (this.running) {
            return;
        }
        this.running = true;
        void this.tick();
    }

    stop(): void {
        this.running = false;
        if (this.timer !== null) {
            clearTimeout(this.timer);
            this.timer = null;
        }
    }

    get snapshot(): PollState<T> {
        return this.state;
    }

    // One poll. Public so tests (and user-triggered refreshes) can
    // drive it without waiting on timers.
    async tick(): Promise<void> {
        if (this.inFlight) {
            return; // coalesce: the running poll will reschedule
        }
        this.inFlight = true;
        try {
            const data = await this.fetchFn();
            this.failures = 0;
            this.state = { data, stale: false, lost: false, lastError: null };
        } catch (error) {
            this.failures += 1;
            this.state = {
                data: this.state.data,
                stale: true,
                lost: this.failures >= LOST_AFTER,
                lastError: error instanceof Error ? error.message : String(error),
            };
        } finally {
            this.inFlight = false;
        }
        this.onUpdate(this.state);
        this.schedule();
    }

    private schedule(): void {
        if (!this.running) {
            return;
        }
        const factor = Math.min(2 ** Math.max(0, this.failures - 1), MAX_BACKOFF_FACTOR);
        this.timer = setTimeout(() => void this.tick(), this.intervalMs * factor);
    }
}
