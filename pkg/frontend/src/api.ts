// Types mirror the gateway JSON exactly; nothing here is invented
// client-side. If the gateway grows a field, add it to the interface;
// the dashboard renders what it receives.

export type FieldKind = "integer" | "enum" | "micro" | "counter" | "ticks" | "string";

export interface ConfigField {
    name: string;
    table: string;
    kind: FieldKind;
    writable: boolean;
    labels?: string[];
}

// Extension rows carry the MIB column names as keys; "index" is the
// row key (a number, or a list for multi-arc indexes).
export type ExtensionRow = { index: number | number[] } & Record<string, unknown>;

export interface ServiceEntry {
    index: number;
    name: string;
    type: string;
    typeCode: number;
    status: string;
    statusCode: number;
    uptimeTicks: number;
    inRequests: number;
    outErrors: number;
    extensions: Record<string, ExtensionRow[]>;
    config: ConfigField[];
}

export interface ServicesPayload {
    schemaVersion: number;
    pipelineStatus: string;
    services: ServiceEntry[];
}

export interface StatSample {
    time: string;
    value: number;
    rate: number | null;
}

export interface StatSeries {
    name: string;
    oid: string;
    samples: StatSample[];
}

export interface StatsPayload {
    schemaVersion: number;
    serviceIndex: number;
    series: StatSeries[];
}

export interface TrapVarbind {
    oid: string;
    name: string;
    value: unknown;
}

export interface TrapRecord {
    receivedAt: string;
    source: string;
    community: string;
    uptimeTicks: number;
    trapOid: string;
    trapName: string;
    varbinds: TrapVarbind[];
}

export interface TrapsPayload {
    schemaVersion: number;
    malformed: number;
    traps: TrapRecord[];
}

export interface ConfigResult {
    schemaVersion: number;
    status: string;
    applied: Record<string, unknown>;
}

export class GatewayError extends Error {
    status: number;
    payload: Record<string, unknown>;

    constructor(status: number, payload: Record<string, unknown>) {
        super(`gateway answered ${status}`);
        this.status = status;
        this.payload = payload;
    }

    // 409 carries the SNMP error name; 4xx/5xx carry an "error" string
    describe(): string {
        if (typeof this.payload.errorStatus === "string") {
            return this.payload.errorStatus;
        }
        if (typeof this.payload.error === "string") {
            return this.payload.error;
        }
        return this.message;
    }
}

// Empty when the dashboard is served by the gateway itself; tests and
// dev setups point it at a live gateway.
let baseUrl = "";

export function setBaseUrl(url: string): void {
    baseUrl = url.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(baseUrl + path, init);
    let body: unknown = null;
    try {
        body = await response.json();
    } catch {
        body = null;
    }
    if (!response.ok) {
        throw new GatewayError(response.status, (body ?? {}) as Record<string, unknown>);
    }
    return body as T;
}

export function getServices(): Promise<ServicesPayload> {
    return request<ServicesPayload>("/api/services");
}

export function getStats(index: number): Promise<StatsPayload> {
    return request<StatsPayload>(`/api/services/${index}/stats`);
}

export function getTraps(): Promise<TrapsPayload> {
    return request<TrapsPayload>("/api/traps");
}

export function postConfig(
    index: number,
    body: Record<string, unknown>,
): Promise<ConfigResult> {
    return request<ConfigResult>(`/api/services/${index}/config`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
    });
}
