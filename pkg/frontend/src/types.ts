/**
 * Input file shapes: the analysis report and the figure specification.
 */

export interface PanelSpec {
    column: string;
    label: string;
    color: string;
}

export interface MarkerSpec {
    /** report column whose classified minima provide the fraction lines */
    source: string;
    /** draw a dotted vertical line per classified fractional-revival entry */
    fractions: boolean;
    /** draw a solid vertical line at the collapse estimate */
    collapse: boolean;
}

export interface FigureSpec {
    panels: PanelSpec[];
    markers: MarkerSpec;
    width?: number;
    panelHeight?: number;
}

export interface ReportExtremum {
    time: number;
    value: number;
    fraction: [number, number] | null;
    residual: number | null;
}

export interface ReportColumn {
    minima: ReportExtremum[];
    maxima: { time: number; value: number }[];
    collapse_estimate: number | null;
    collapse_error: string | null;
}

export interface Report {
    kind: string;
    columns: Record<string, ReportColumn>;
    timescales: Record<string, number | null>;
}

export class InputError extends Error {}

function fail(message: string): never {
    throw new InputError(message);
}

export function parseFigureSpec(raw: unknown): FigureSpec {
    if (typeof raw !== "object" || raw === null) fail("figspec must be a JSON object");
    const spec = raw as Record<string, unknown>;
    if (!Array.isArray(spec.panels) || spec.panels.length === 0) {
        fail("figspec needs a non-empty 'panels' array");
    }
    const panels = spec.panels.map((p, i) => {
        const panel = p as Record<string, unknown>;
        for (const key of ["column", "label", "color"]) {
            if (typeof panel[key] !== "string") {
                fail(`figspec panel ${i} is missing string field '${key}'`);
            }
        }
        return {
            column: panel.column as string,
            label: panel.label as string,
            color: panel.color as string,
        };
    });
    const m = (spec.markers ?? {}) as Record<string, unknown>;
    const markers: MarkerSpec = {
        source: typeof m.source === "string" ? m.source : panels[panels.length - 1].column,
        fractions: m.fractions === undefined ? true : Boolean(m.fractions),
        collapse: m.collapse === undefined ? true : Boolean(m.collapse),
    };
    const width = spec.width === undefined ? undefined : Number(spec.width);
    const panelHeight = spec.panelHeight === undefined ? undefined : Number(spec.panelHeight);
    return { panels, markers, width, panelHeight };
}

export function parseReport(raw: unknown): Report {
    if (typeof raw !== "object" || raw === null) fail("report must be a JSON object");
    const report = raw as Record<string, unknown>;
    if (report.kind !== "qrevival-report") {
        fail(`not a qrevival report (kind = ${JSON.stringify(report.kind)})`);
    }
    if (typeof report.columns !== "object" || report.columns === null) {
        fail("report is missing 'columns'");
    }
    return report as unknown as Report;
}
