/**
 * Stacked-panel SVG builder: one panel per diagnostic column on a shared
 * time axis, dotted vertical lines at classified fractional-revival times,
 * and a solid vertical line at the collapse estimate.
 */

import { SeriesTable } from "./csv.js";
import { FigureSpec, InputError, Report } from "./types.js";

const MARGIN_LEFT = 64;
const MARGIN_RIGHT = 16;
const MARGIN_TOP = 18;
const MARGIN_BOTTOM = 44;
const PANEL_GAP = 14;
const DEFAULT_WIDTH = 760;
const DEFAULT_PANEL_HEIGHT = 150;

function fmt(value: number): string {
    return value.toFixed(2);
}

function axisLabel(value: number): string {
    return Number.parseFloat(value.toPrecision(4)).toString();
}

function escapeXml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function buildFigure(series: SeriesTable, report: Report, spec: FigureSpec): string {
    for (const panel of spec.panels) {
        if (!series.has(panel.column)) {
            throw new InputError(`column '${panel.column}' not present in series header`);
        }
    }
    const width = spec.width ?? DEFAULT_WIDTH;
    const panelHeight = spec.panelHeight ?? DEFAULT_PANEL_HEIGHT;
    const plotWidth = width - MARGIN_LEFT - MARGIN_RIGHT;
    const height =
        MARGIN_TOP + spec.panels.length * panelHeight + (spec.panels.length - 1) * PANEL_GAP + MARGIN_BOTTOM;

    const times = series.column("t");
    const tMin = times[0];
    const tMax = times[times.length - 1];
    const toX = (t: number) => MARGIN_LEFT + ((t - tMin) / (tMax - tMin)) * plotWidth;

    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
            `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">`,
    );
    parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

    spec.panels.forEach((panel, index) => {
        const top = MARGIN_TOP + index * (panelHeight + PANEL_GAP);
        const values = series.column(panel.column);
        let lo = Math.min(...values);
        let hi = Math.max(...values);
        if (hi === lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        const pad = 0.06 * (hi - lo);
        lo -= pad;
        hi += pad;
        const toY = (v: number) => top + panelHeight - ((v - lo) / (hi - lo)) * panelHeight;

        const points = times
            .map((t, i) => `${fmt(toX(t))},${fmt(toY(values[i]))}`)
            .join(" ");
        parts.push(`<g class="panel" data-column="${escapeXml(panel.column)}">`);
        parts.push(
            `<rect x="${MARGIN_LEFT}" y="${top}" width="${plotWidth}" height="${panelHeight}" ` +
                `fill="none" stroke="#888" stroke-width="1"/>`,
        );
        parts.push(
            `<polyline points="${points}" fill="none" stroke="${escapeXml(panel.color)}" stroke-width="1"/>`,
        );
        parts.push(
            `<text x="${MARGIN_LEFT - 6}" y="${top + 10}" text-anchor="end">${axisLabel(hi)}</text>`,
        );
        parts.push(
            `<text x="${MARGIN_LEFT - 6}" y="${top + panelHeight}" text-anchor="end">${axisLabel(lo)}</text>`,
        );
        parts.push(
            `<text class="panel-label" x="${width - MARGIN_RIGHT - 6}" y="${top + 14}" ` +
                `text-anchor="end" fill="${escapeXml(panel.color)}">${escapeXml(panel.label)}</text>`,
        );
        parts.push(`</g>`);
    });

    const plotTop = MARGIN_TOP;
    const plotBottom = MARGIN_TOP + spec.panels.length * panelHeight + (spec.panels.length - 1) * PANEL_GAP;
    const markers: string[] = [];
    const source = report.columns[spec.markers.source];
    if (spec.markers.fractions || spec.markers.collapse) {
        if (source === undefined) {
            throw new InputError(`marker source column '${spec.markers.source}' not present in report`);
        }
    }
    if (spec.markers.fractions && source) {
        for (const extremum of source.minima) {
            if (extremum.fraction === null) continue;
            if (extremum.time < tMin || extremum.time > tMax) continue;
            const x = fmt(toX(extremum.time));
            const [p, q] = extremum.fraction;
            markers.push(
                `<line class="marker-fraction" data-fraction="${p}/${q}" x1="${x}" y1="${plotTop}" ` +
                    `x2="${x}" y2="${plotBottom}" stroke="#555" stroke-width="1" stroke-dasharray="3,4"/>`,
            );
        }
    }
    if (spec.markers.collapse && source && source.collapse_estimate !== null) {
        const x = fmt(toX(source.collapse_estimate));
        markers.push(
            `<line class="marker-collapse" x1="${x}" y1="${plotTop}" x2="${x}" y2="${plotBottom}" ` +
                `stroke="#2e7d32" stroke-width="1.5"/>`,
        );
    }
    parts.push(`<g class="markers">${markers.join("")}</g>`);

    // shared time axis under the bottom panel
    const ticks = 6;
    for (let i = 0; i <= ticks; i += 1) {
        const t = tMin + ((tMax - tMin) * i) / ticks;
        const x = fmt(toX(t));
        parts.push(
            `<line x1="${x}" y1="${plotBottom}" x2="${x}" y2="${plotBottom + 5}" stroke="#333"/>`,
        );
        parts.push(
            `<text x="${x}" y="${plotBottom + 18}" text-anchor="middle">${axisLabel(t)}</text>`,
        );
    }
    parts.push(
        `<text x="${MARGIN_LEFT + plotWidth / 2}" y="${height - 8}" text-anchor="middle">t</text>`,
    );
    parts.push("</svg>");
    return parts.join("\n");
}
