// Counter charts as plain inline SVG. The gateway already turned raw
// counter readings into wrap-aware per-second rates; the chart just
// plots the rate column of a series.

import { StatSeries } from "./api.js";

const WIDTH = 560;
const HEIGHT = 120;
const PAD = 6;

export function renderRateChart(container: HTMLElement, series: StatSeries[]): void {
    container.textContent = "";
    const plottable = series.filter(
        (s) => s.samples.filter((p) => p.rate !== null).length >= 2,
    );
    if (plottable.length === 0) {
        container.innerHTML = '<p class="placeholder">no samples yet; the poller is warming up</p>';
        return;
    }
    const maxRate = Math.max(
        1e-9,
        ...plottable.flatMap((s) => s.samples.map((p) => p.rate ?? 0)),
    );
    for (const s of plottable) {
        const rates = s.samples
            .map((p) => p.rate)
            .filter((r): r is number => r !== null);
        const step = (WIDTH - 2 * PAD) / Math.max(1, rates.length - 1);
        const points = rates
            .map((rate, i) => {
                const x = PAD + i * step;
                const y = HEIGHT - PAD - (rate / maxRate) * (HEIGHT - 2 * PAD);
                return `${x.toFixed(1)},${y.toFixed(1)}`;
            })
            .join(" ");
        const label = document.createElement("h3");
        const last = rates[rates.length - 1];
        label.textContent = `${s.name}: ${last.toFixed(1)}/s (peak ${maxRate.toFixed(1)}/s)`;
        container.appendChild(label);
        const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
        svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
        svg.setAttribute("class", "rate-chart");
        svg.innerHTML =
            `<line x1="${PAD}" y1="${HEIGHT - PAD}" x2="${WIDTH - PAD}" y2="${HEIGHT - PAD}" class="axis"/>` +
            `<polyline points="${points}" class="rate-line" data-series="${s.name}"/>`;
        container.appendChild(svg);
    }
}
