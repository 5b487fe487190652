// Frozen gateway payloads for the mocked tests. Shapes mirror what the
// live gateway emits field for field; numbers are fixed so snapshots
// and conversions are deterministic.

import { vi } from "vitest";
import {
    ConfigField,
    ServicesPayload,
    StatsPayload,
    TrapsPayload,
} from "../src/api.js";

function statusField(): ConfigField {
    return {
        name: "serviceStatus",
        table: "serviceTable",
        kind: "enum",
        writable: true,
        labels: ["up", "down", "starting", "stopping"],
    };
}

export function fiveServices(): ServicesPayload {
    return {
        schemaVersion: 1,
        pipelineStatus: "up",
        services: [
            {
                index: 1,
                name: "sample-loading",
                type: "sampleLoading",
                typeCode: 3,
                status: "up",
                statusCode: 1,
                uptimeTicks: 362100,
                inRequests: 42,
                outErrors: 0,
                extensions: {
                    sampleLoadingServiceTable: [
                        { index: 1, serviceIndex: 1, iFormat: 1, adSampleLength: 4096 },
                    ],
                },
                config: [
                    statusField(),
                    {
                        name: "iFormat",
                        table: "sampleLoadingServiceTable",
                        kind: "integer",
                        writable: true,
                    },
                    {
                        name: "adSampleLength",
                        table: "sampleLoadingServiceTable",
                        kind: "integer",
                        writable: false,
                    },
                ],
            },
            {
                index: 2,
                name: "preprocessing",
                type: "preprocessing",
                typeCode: 4,
                status: "up",
                statusCode: 1,
                uptimeTicks: 361900,
                inRequests: 42,
                outErrors: 0,
                extensions: {
                    preprocessingServiceTable: [
                        {
                            index: 2,
                            serviceIndex: 2,
                            dSilenceThresholdMicro: 10000,
                            bRemoveNoise: "false",
                            bRemoveSilence: "false",
                        },
                    ],
                },
                config: [
                    statusField(),
                    {
                        name: "dSilenceThresholdMicro",
                        table: "preprocessingServiceTable",
                        kind: "micro",
                        writable: true,
                    },
                    {
                        name: "bRemoveNoise",
                        table: "preprocessingServiceTable",
                        kind: "enum",
                        writable: true,
                        labels: ["true", "false"],
                    },
                    {
                        name: "bRemoveSilence",
                        table: "preprocessingServiceTable",
                        kind: "enum",
                        writable: true,
                        labels: ["true", "false"],
                    },
                ],
            },
            {
                index: 3,
                name: "feature-extraction",
                type: "featureExtraction",
                typeCode: 5,
                status: "up",
                statusCode: 1,
                uptimeTicks: 361700,
                inRequests: 42,
                outErrors: 0,
                extensions: {
                    featureextractionServiceTable: [
                        { index: 3, serviceIndex: 3, adFeaturesLength: 8, oFeatureSetSize: 8 },
                    ],
                    lpcServiceTable: [
                        { index: 3, serviceIndex: 3, iPoles: 8, iWindowLen: 256 },
                    ],
                },
                config: [
                    statusField(),
                    {
                        name: "adFeaturesLength",
                        table: "featureextractionServiceTable",
                        kind: "integer",
                        writable: false,
                    },
                    {
                        name: "oFeatureSetSize",
                        table: "featureextractionServiceTable",
                        kind: "integer",
                        writable: false,
                    },
                    {
                        name: "iPoles",
                        table: "lpcServiceTable",
                        kind: "integer",
                        writable: true,
                    },
                    {
                        name: "iWindowLen",
                        table: "lpcServiceTable",
                        kind: "integer",
                        writable: true,
                    },
                ],
            },
            {
                index: 4,
                name: "classification",
                type: "classification",
                typeCode: 6,
                status: "up",
                statusCode: 1,
                uptimeTicks: 361500,
                inRequests: 42,
                outErrors: 0,
                extensions: {
                    storageTable: [
                        {
                            index: 1,
                            storageIndex: 1,
                            storagePath: "/data/voices.marfts",
                            storageSizeBytes: 2048,
                            storageRecordCount: 6,
                        },
                    ],
                    classificationServiceTable: [
                        {
                            index: 4,
                            serviceIndex: 4,
                            adFeaturesLength: 8,
                            oResultSetSize: 3,
                            oResultSetTopId: 1,
                        },
                    ],
                },
                config: [
                    statusField(),
                    { name: "storagePath", table: "storageTable", kind: "string", writable: false },
                    { name: "storageSizeBytes", table: "storageTable", kind: "integer", writable: false },
                    { name: "storageRecordCount", table: "storageTable", kind: "integer", writable: false },
                    {
                        name: "adFeaturesLength",
                        table: "classificationServiceTable",
                        kind: "integer",
                        writable: false,
                    },
                    {
                        name: "oResultSetSize",
                        table: "classificationServiceTable",
                        kind: "integer",
                        writable: false,
                    },
                    {
                        name: "oResultSetTopId",
                        table: "classificationServiceTable",
                        kind: "integer",
                        writable: false,
                    },
                ],
            },
            {
                index: 5,
                name: "speaker-ident-app",
                type: "application",
                typeCode: 1,
                status: "up",
                statusCode: 1,
                uptimeTicks: 361300,
                inRequests: 7,
                outErrors: 0,
                extensions: {
                    appTable: [
                        { index: 5, appRequests: 7, appLastSpeakerId: 1, appLastDistanceMicro: 123456 },
                    ],
                },
                config: [
                    statusField(),
                    { name: "appRequests", table: "appTable", kind: "counter", writable: false },
                    { name: "appLastSpeakerId", table: "appTable", kind: "integer", writable: false },
                    { name: "appLastDistanceMicro", table: "appTable", kind: "micro", writable: false },
                ],
            },
        ],
    };
}

export function statsFixture(): StatsPayload {
    return {
        schemaVersion: 1,
        serviceIndex: 1,
        series: [
            {
                name: "serviceInRequests.1",
                oid: "1.3.6.1.4.1.28218.3.1.1.6.1",
                samples: [
                    { time: "2026-08-19T10:00:00", value: 40, rate: null },
                    { time: "2026-08-19T10:00:02", value: 44, rate: 2.0 },
                    { time: "2026-08-19T10:00:04", value: 52, rate: 4.0 },
                    { time: "2026-08-19T10:00:06", value: 54, rate: 1.0 },
                ],
            },
            {
                name: "serviceOutErrors.1",
                oid: "1.3.6.1.4.1.28218.3.1.1.7.1",
                samples: [
                    { time: "2026-08-19T10:00:00", value: 0, rate: null },
                    { time: "2026-08-19T10:00:02", value: 0, rate: 0.0 },
                    { time: "2026-08-19T10:00:04", value: 0, rate: 0.0 },
                    { time: "2026-08-19T10:00:06", value: 0, rate: 0.0 },
                ],
            },
        ],
    };
}

export function trapsFixture(): TrapsPayload {
    return {
        schemaVersion: 1,
        malformed: 0,
        traps: [
            {
                receivedAt: "2026-08-19T10:00:00",
                source: "127.0.0.1:50001",
                community: "public",
                uptimeTicks: 0,
                trapOid: "1.3.6.1.4.1.28218.3.0.1",
                trapName: "serviceStatusChange",
                varbinds: [
                    { oid: "1.3.6.1.4.1.28218.3.1.1.1.4", name: "serviceIndex.4", value: 4 },
                    { oid: "1.3.6.1.4.1.28218.3.1.1.4.4", name: "serviceStatus.4", value: 1 },
                ],
            },
            {
                receivedAt: "2026-08-19T10:05:00",
                source: "127.0.0.1:50001",
                community: "public",
                uptimeTicks: 30000,
                trapOid: "1.3.6.1.4.1.28218.3.0.1",
                trapName: "serviceStatusChange",
                varbinds: [
                    { oid: "1.3.6.1.4.1.28218.3.1.1.1.4", name: "serviceIndex.4", value: 4 },
                    { oid: "1.3.6.1.4.1.28218.3.1.1.4.4", name: "serviceStatus.4", value: 2 },
                ],
            },
        ],
    };
}

export interface LoggedRequest {
    method: string;
    path: string;
    body: unknown;
}

// Stands in for global fetch. Payloads are mutable so a test can flip
// a status and poll again; `failing` simulates the network going away.
export class FakeGateway {
    services: ServicesPayload = fiveServices();
    stats: StatsPayload = statsFixture();
    traps: TrapsPayload = trapsFixture();
    failing = false;
    requests: LoggedRequest[] = [];
    configReply: { status: number; body: unknown } | null = null;

    install(): void {
        vi.stubGlobal("fetch", (input: unknown, init?: RequestInit) =>
            this.handle(String(input), init),
        );
    }

    posts(): LoggedRequest[] {
        return this.requests.filter((r) => r.method === "POST");
    }

    private async handle(url: string, init?: RequestInit): Promise<Response> {
        const method = init?.method ?? "GET";
        const path = url.replace(/^https?:\/\/[^/]+/, "");
        const body = init?.body ? JSON.parse(String(init.body)) : undefined;
        this.requests.push({ method, path, body });
        if (this.failing) {
            throw new TypeError("fetch failed");
        }
        const respond = (status: number, payload: unknown): Response =>
            new Response(JSON.stringify(payload), {
                status,
                headers: { "Content-Type": "application/json" },
            });

        if (method === "GET" && path === "/api/services") {
            return respond(200, this.services);
        }
        if (method === "GET" && /^\/api\/services\/\d+\/stats$/.test(path)) {
            return respond(200, this.stats);
        }
        if (method === "GET" && path === "/api/traps") {
            return respond(200, this.traps);
        }
        if (method === "POST" && /^\/api\/services\/\d+\/config$/.test(path)) {
            if (this.configReply !== null) {
                return respond(this.configReply.status, this.configReply.body);
            }
            return respond(200, { schemaVersion: 1, status: "noError", applied: body });
        }
        return respond(404, { error: `no route for ${method} ${path}` });
    }
}
