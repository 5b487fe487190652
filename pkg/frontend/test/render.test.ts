// Trap log ordering and the chart's degenerate cases.

import { describe, expect, it } from "vitest";
import { renderRateChart } from "../src/chart.js";
import { formatTicks, renderTraps } from "../src/render.js";
import { statsFixture, trapsFixture } from "./fixtures.js";

describe("trap log", () => {
    it("lists notifications newest-first", () => {
        const container = document.createElement("div");
        renderTraps(container, trapsFixture());
        const rows = container.querySelectorAll<HTMLTableRowElement>("tbody tr");
        expect(rows).toHaveLength(2);
        // the fixture arrives in arrival order; the log reverses it
        expect(rows[0].cells[0].textContent).toBe("2026-08-19T10:05:00");
        expect(rows[1].cells[0].textContent).toBe("2026-08-19T10:00:00");
        expect(rows[0].cells[1].textContent).toBe("serviceStatusChange");
        expect(rows[0].cells[3].textContent).toBe(
            "serviceIndex.4 = 4, serviceStatus.4 = 2",
        );
    });

    it("shows a placeholder before any notification arrives", () => {
        const container = document.createElement("div");
        renderTraps(container, { schemaVersion: 1, malformed: 0, traps: [] });
        expect(container.querySelector(".placeholder")!.textContent).toBe(
            "no notifications received yet",
        );
        expect(container.querySelector("table")).toBeNull();
    });

    it("notes dropped datagrams when the gateway counted any", () => {
        const payload = trapsFixture();
        payload.malformed = 3;
        const container = document.createElement("div");
        renderTraps(container, payload);
        expect(container.textContent).toContain("3 malformed datagram(s) dropped");
    });
});

describe("rate chart", () => {
    it("draws one polyline per series", () => {
        const container = document.createElement("div");
        renderRateChart(container, statsFixture().series);
        const lines = container.querySelectorAll("polyline.rate-line");
        expect(lines).toHaveLength(2);
        expect(lines[1].getAttribute("data-series")).toBe("serviceOutErrors.1");
        // a flat-zero series still draws (rates exist, all 0.0)
        expect(lines[1].getAttribute("points")).toContain(",");
    });

    it("shows a warm-up placeholder until two rates exist", () => {
        const container = document.createElement("div");
        const series = statsFixture().series.map((s) => ({
            ...s,
            samples: s.samples.slice(0, 2).map((p, i) => ({
                ...p,
                rate: i === 0 ? null : p.rate,
            })),
        }));
        // one non-null rate per series is not enough to draw a line
        renderRateChart(container, series);
        expect(container.textContent).toContain("no samples yet");
        expect(container.querySelector("polyline")).toBeNull();
    });
});

describe("uptime clock", () => {
    it("renders hundredth ticks as h:mm:ss", () => {
        expect(formatTicks(0)).toBe("0:00:00");
        expect(formatTicks(362100)).toBe("1:00:21");
        expect(formatTicks(99)).toBe("0:00:00");
        expect(formatTicks(6000)).toBe("0:01:00");
    });
});
