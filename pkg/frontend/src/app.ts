// Wires pollers to renderers. The app object is what main.ts boots in
// the browser and what the tests drive directly: every poller exposes
// a manual tick so tests never wait on wall-clock timers.

import {
    ServicesPayload,
    StatsPayload,
    TrapsPayload,
    getServices,
    getStats,
    getTraps,
    postConfig,
} from "./api.js";
import { renderRateChart } from "./chart.js";
import { buildConfigForm } from "./config.js";
import { Poller, PollState } from "./poller.js";
import {
    renderBanner,
    renderExtensions,
    renderPipelineStatus,
    renderServiceRows,
    renderTraps,
} from "./render.js";

export interface AppOptions {
    servicesIntervalMs?: number;
    trapsIntervalMs?: number;
    statsIntervalMs?: number;
}

const SKELETON = `
<header>
  <h1>pipeline console</h1>
  <span id="pipeline-pill" class="pill">pipeline ?</span>
</header>
<div id="banner" class="banner hidden"></div>
<section>
  <h2>services</h2>
  <table id="services">
    <thead>
      <tr><th>#</th><th>name</th><th>type</th><th>status</th>
      <th>uptime</th><th>in requests</th><th>out errors</th></tr>
    </thead>
    <tbody></tbody>
  </table>
</section>
<section id="detail" hidden>
  <h2 id="detail-title"></h2>
  <div id="extensions"></div>
  <h3>configuration</h3>
  <form id="config"></form>
  <h3>request rates</h3>
  <div id="chart"></div>
</section>
<section>
  <h2>notifications</h2>
  <div id="traps"></div>
</section>
`;

export class ConsoleApp {
    private readonly banner: HTMLElement;
    private readonly pill: HTMLElement;
    private readonly tbody: HTMLTableSectionElement;
    private readonly detail: HTMLElement;
    private readonly detailTitle: HTMLElement;
    private readonly extensionsEl: HTMLElement;
    private readonly configForm: HTMLFormElement;
    private readonly chartEl: HTMLElement;
    private readonly trapsEl: HTMLElement;

    private readonly servicesPoller: Poller<ServicesPayload>;
    private readonly trapsPoller: Poller<TrapsPayload>;
    private statsPoller: Poller<StatsPayload> | null = null;
    private readonly statsIntervalMs: number;

    private running = false;
    selected: number | null = null;
    // which service the form was last built for; polling must not
    // clobber in-progress edits, so the form only rebuilds on selection
    private configBuiltFor: number | null = null;

    constructor(root: HTMLElement, options: AppOptions = {}) {
        root.innerHTML = SKELETON;
        const pick = <E extends HTMLElement>(selector: string): E => {
            const el = root.querySelector<E>(selector);
            if (el === null) {
                throw new Error(`skeleton is missing ${selector}`);
            }
            return el;
        };
        this.banner = pick("#banner");
        this.pill = pick("#pipeline-pill");
        this.tbody = pick<HTMLTableSectionElement>("#services tbody");
        this.detail = pick("#detail");
        this.detailTitle = pick("#detail-title");
        this.extensionsEl = pick("#extensions");
        this.configForm = pick<HTMLFormElement>("#config");
        this.chartEl = pick("#chart");
        this.trapsEl = pick("#traps");

        this.statsIntervalMs = options.statsIntervalMs ?? 2000;
        this.servicesPoller = new Poller(
            getServices,
            (state) => this.applyServices(state),
            options.servicesIntervalMs ?? 2000,
        );
        this.trapsPoller = new Poller(
            getTraps,
            (state) => this.applyTraps(state),
            options.trapsIntervalMs ?? 2000,
        );
    }

    start(): void {
        this.running = true;
        this.servicesPoller.start();
        this.trapsPoller.start();
        this.statsPoller?.start();
    }

    stop(): void {
        this.running = false;
        this.servicesPoller.stop();
        this.trapsPoller.stop();
        this.statsPoller?.stop();
    }

    pollServices(): Promise<void> {
        return this.servicesPoller.tick();
    }

    pollTraps(): Promise<void> {
        return this.trapsPoller.tick();
    }

    pollStats(): Promise<void> {
        return this.statsPoller?.tick() ?? Promise.resolve();
    }

    select(index: number): void {
        if (this.selected === index) {
            return;
        }
        this.selected = index;
        this.configBuiltFor = null;
        this.statsPoller?.stop();
        this.statsPoller = new Poller(
            () => getStats(index),
            (state) => this.applyStats(state),
            this.statsIntervalMs,
        );
        if (this.running) {
            this.statsPoller.start();
        }
        this.applyServices(this.servicesPoller.snapshot);
    }

    private applyServices(state: PollState<ServicesPayload>): void {
        renderBanner(this.banner, state);
        if (state.data === null) {
            return; // nothing rendered yet and nothing to keep stale
        }
        renderPipelineStatus(this.pill, state.data);
        renderServiceRows(this.tbody, state.data.services, this.selected, (index) =>
            this.select(index),
        );
        this.renderDetail(state.data);
    }

    private renderDetail(payload: ServicesPayload): void {
        const service = payload.services.find((s) => s.index === this.selected);
        if (service === undefined) {
            this.detail.hidden = true;
            return;
        }
        this.detail.hidden = false;
        this.detailTitle.textContent = `${service.name} (service ${service.index})`;
        renderExtensions(this.extensionsEl, service);
        if (this.configBuiltFor !== service.index) {
            this.configBuiltFor = service.index;
            buildConfigForm(this.configForm, service, postConfig, () => {
                // refresh the roster so extension cells show what the
                // agent accepted; the form itself stays as typed
                void this.servicesPoller.tick();
            });
        }
    }

    private applyStats(state: PollState<StatsPayload>): void {
        if (state.data !== null) {
            renderRateChart(this.chartEl, state.data.series);
        }
    }

    private applyTraps(state: PollState<TrapsPayload>): void {
        if (state.data !== null) {
            renderTraps(this.trapsEl, state.data);
        }
    }
}

export function createApp(root: HTMLElement, options: AppOptions = {}): ConsoleApp {
    return new ConsoleApp(root, options);
}
