// The per-service configuration editor. Fields come from the gateway's
// config descriptors; values come from the same payload's extension
// rows. Validation happens client-side, conversion to wire units
// happens exactly once, on submit.

import { ConfigField, ConfigResult, GatewayError, ServiceEntry } from "./api.js";
import {
    decimalToMicro,
    microToDecimal,
    validateDecimal,
    validateInteger,
} from "./micro.js";

export type SubmitFn = (
    index: number,
    body: Record<string, unknown>,
) => Promise<ConfigResult>;

function currentValue(service: ServiceEntry, field: ConfigField): unknown {
    if (field.name === "serviceStatus") {
        return service.status;
    }
    const rows = service.extensions[field.table] ?? [];
    return rows.length > 0 ? rows[0][field.name] : undefined;
}

function displayValue(field: ConfigField, value: unknown): string {
    if (value === undefined || value === null) {
        return "";
    }
    if (field.kind === "micro" && typeof value === "number") {
        return microToDecimal(value);
    }
    return String(value);
}

function controlFor(field: ConfigField, initial: string): HTMLElement {
    if (!field.writable) {
        const span = document.createElement("span");
        span.className = "readonly-value";
        span.textContent = initial;
        return span;
    }
    if (field.kind === "enum") {
        const select = document.createElement("select");
        select.name = field.name;
        for (const label of field.labels ?? []) {
            const option = document.createElement("option");
            option.value = label;
            option.textContent = label;
            option.selected = label === initial;
            select.appendChild(option);
        }
        return select;
    }
    const input = document.createElement("input");
    input.type = "text";
    input.name = field.name;
    input.value = initial;
    return input;
}

function validate(field: ConfigField, text: string): string | null {
    switch (field.kind) {
        case "integer":
            return validateInteger(text);
        case "micro":
            return validateDecimal(text);
        case "enum":
            return (field.labels ?? []).includes(text)
                ? null
                : `must be one of: ${(field.labels ?? []).join(", ")}`;
        default:
            return null;
    }
}

function wireValue(field: ConfigField, text: string): unknown {
    if (field.kind === "micro") {
        return decimalToMicro(text);
    }
    if (field.kind === "integer") {
        return parseInt(text.trim(), 10);
    }
    return text; // enum labels and strings go as-is; the gateway maps labels
}

export function buildConfigForm(
    form: HTMLFormElement,
    service: ServiceEntry,
    submit: SubmitFn,
    onApplied: () => void,
): void {
    form.textContent = "";
    const initials = new Map<string, string>();

    for (const field of service.config) {
        const row = document.createElement("div");
        row.className = "config-row";
        const label = document.createElement("label");
        label.textContent = field.kind === "micro"
            ? `${field.name} (decimal)`
            : field.name;
        label.htmlFor = `cfg-${field.name}`;
        row.appendChild(label);
        const initial = displayValue(field, currentValue(service, field));
        const control = controlFor(field, initial);
        control.id = `cfg-${field.name}`;
        row.appendChild(control);
        if (field.writable) {
            initials.set(field.name, initial);
            const error = document.createElement("span");
            error.className = "field-error";
            error.dataset.for = field.name;
            row.appendChild(error);
        }
        form.appendChild(row);
    }

    const actions = document.createElement("div");
    actions.className = "config-actions";
    const button = document.createElement("button");
    button.type = "submit";
    button.textContent = "apply";
    actions.appendChild(button);
    const outcome = document.createElement("span");
    outcome.className = "config-outcome";
    actions.appendChild(outcome);
    form.appendChild(actions);

    form.addEventListener("submit", (event) => {
        event.preventDefault();
        void submitForm(form, service, initials, submit, outcome, onApplied);
    });
}

async function submitForm(
    form: HTMLFormElement,
    service: ServiceEntry,
    initials: Map<string, string>,
    submit: SubmitFn,
    outcome: HTMLElement,
    onApplied: () => void,
): Promise<void> {
    outcome.textContent = "";
    outcome.className = "config-outcome";
    const body: Record<string, unknown> = {};
    let invalid = false;

    for (const field of service.config) {
        if (!field.writable) {
            continue;
        }
        const control = form.querySelector<HTMLInputElement | HTMLSelectElement>(
            `[name="${field.name}"]`,
        );
        const errorEl = form.querySelector<HTMLElement>(
            `.field-error[data-for="${field.name}"]`,
        );
        if (!control || !errorEl) {
            continue;
        }
        const text = control.value;
        const error = validate(field, text);
        errorEl.textContent = error ?? "";
        if (error !== null) {
            invalid = true;
            continue;
        }
        if (text !== initials.get(field.name)) {
            body[field.name] = wireValue(field, text);
        }
    }

    if (invalid) {
        return; // inline messages are up; nothing goes on the wire
    }
    if (Object.keys(body).length === 0) {
        outcome.textContent = "nothing changed";
        return;
    }
    try {
        const result = await submit(service.index, body);
        const applied = Object.entries(result.applied)
            .map(([key, value]) => `${key} = ${String(value)}`)
            .join(", ");
        outcome.textContent = `applied: ${applied}`;
        outcome.className = "config-outcome ok";
        onApplied();
    } catch (error) {
        outcome.className = "config-outcome failed";
        outcome.textContent =
            error instanceof GatewayError ? error.describe() : String(error);
    }
}
