// DOM builders for the dashboard. Everything rendered here comes out
// of a gateway payload; formatting (status colors, tick clocks, micro
// decimals) never changes a value, only its presentation.

import { ConfigField, ServiceEntry, ServicesPayload, TrapsPayload } from "./api.js";
import { microToDecimal } from "./micro.js";
import { PollState } from "./poller.js";

export function statusClass(statusCode: number): string {
    if (statusCode === 1) {
        return "status-up";
    }
    if (statusCode === 2) {
        return "status-down";
    }
    return "status-warn";
}

// TimeTicks are hundredths of a second
export function formatTicks(ticks: number): string {
    const totalSeconds = Math.floor(ticks / 100);
    const hours = Math.floor(totalSeconds / 3600);
    const minutes = Math.floor((totalSeconds % 3600) / 60);
    const seconds = totalSeconds % 60;
    const pad = (n: number) => String(n).padStart(2, "0");
    return `${hours}:${pad(minutes)}:${pad(seconds)}`;
}

export function fieldByName(service: ServiceEntry, column: string): ConfigField | undefined {
    return service.config.find((field) => field.name === column);
}

// Extension cells named *Micro arrive as integer micro-units; the
// descriptor tells us which ones those are.
function cellText(service: ServiceEntry, column: string, value: unknown): string {
    const field = fieldByName(service, column);
    if (field?.kind === "micro" && typeof value === "number") {
        return microToDecimal(value);
    }
    return String(value);
}

export function renderServiceRows(
    tbody: HTMLTableSectionElement,
    services: ServiceEntry[],
    selected: number | null,
    onSelect: (index: number) => void,
): void {
    tbody.textContent = "";
    for (const service of services) {
        const row = document.createElement("tr");
        row.dataset.index = String(service.index);
        if (service.index === selected) {
            row.classList.add("selected");
        }
        const status = `<span class="pill ${statusClass(service.statusCode)}">${service.status}</span>`;
        row.innerHTML =
            `<td>${service.index}</td>` +
            `<td>${service.name}</td>` +
            `<td>${service.type}</td>` +
            `<td>${status}</td>` +
            `<td>${formatTicks(service.uptimeTicks)}</td>` +
            `<td class="num">${service.inRequests}</td>` +
            `<td class="num">${service.outErrors}</td>`;
        row.addEventListener("click", () => onSelect(service.index));
        tbody.appendChild(row);
    }
}

export function renderPipelineStatus(el: HTMLElement, payload: ServicesPayload): void {
    el.textContent = `pipeline ${payload.pipelineStatus}`;
    el.className = `pill ${payload.pipelineStatus === "up" ? "status-up" : "status-down"}`;
}

export function renderBanner(el: HTMLElement, state: PollState<unknown>): void {
    if (!state.stale) {
        el.className = "banner hidden";
        el.textContent = "";
        return;
    }
    if (state.lost) {
        el.className = "banner lost";
        el.textContent =
            `connection lost (${state.lastError ?? "unknown error"}); retrying with backoff`;
    } else {
        el.className = "banner stale";
        el.textContent = `showing stale data: last poll failed (${state.lastError ?? "unknown error"})`;
    }
}

export function renderExtensions(container: HTMLElement, service: ServiceEntry): void {
    container.textContent = "";
    const tables = Object.entries(service.extensions);
    if (tables.length === 0) {
        container.innerHTML = '<p class="placeholder">no extension tables</p>';
        return;
    }
    for (const [tableName, rows] of tables) {
        const heading = document.createElement("h3");
        heading.textContent = tableName;
        container.appendChild(heading);
        const table = document.createElement("table");
        const columns = Object.keys(rows[0] ?? {});
        const head = columns.map((c) => `<th>${c}</th>`).join("");
        const body = rows
            .map(
                (row) =>
                    "<tr>" +
                    columns
                        .map((c) => `<td>${cellText(service, c, row[c as keyof typeof row])}</td>`)
                        .join("") +
                    "</tr>",
            )
            .join("");
        table.innerHTML = `<thead><tr>${head}</tr></thead><tbody>${body}</tbody>`;
        container.appendChild(table);
    }
}

export function renderTraps(container: HTMLElement, payload: TrapsPayload): void {
    container.textContent = "";
    if (payload.traps.length === 0) {
        container.innerHTML = '<p class="placeholder">no notifications received yet</p>';
        return;
    }
    const table = document.createElement("table");
    const rows = [...payload.traps]
        .reverse() // the gateway lists arrival order; the log reads newest-first
        .map((trap) => {
            const detail = trap.varbinds
                .map((vb) => `${vb.name} = ${String(vb.value)}`)
                .join(", ");
            return (
                `<tr><td>${trap.receivedAt}</td><td>${trap.trapName}</td>` +
                `<td>${trap.source}</td><td>${detail}</td></tr>`
            );
        })
        .join("");
    table.innerHTML =
        "<thead><tr><th>received</th><th>notification</th><th>source</th>" +
        `<th>varbinds</th></tr></thead><tbody>${rows}</tbody>`;
    container.appendChild(table);
    if (payload.malformed > 0) {
        const note = document.createElement("p");
        note.className = "placeholder";
        note.textContent = `${payload.malformed} malformed datagram(s) dropped`;
        container.appendChild(note);
    }
}
