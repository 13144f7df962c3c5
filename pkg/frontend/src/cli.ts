#!/usr/bin/env node
/**
 * render --series <csv> --report <json> --figspec <json> --out <image.svg>
 */

import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { parseSeriesCsv } from "./csv.js";
import { buildFigure } from "./figure.js";
import { InputError, parseFigureSpec, parseReport } from "./types.js";

const USAGE =
    "usage: qrevival-render render --series <csv> --report <json> --figspec <json> --out <image.svg>";

export function run(argv: string[]): number {
    let values: Record<string, string | boolean | undefined>;
    let positionals: string[];
    try {
        ({ values, positionals } = parseArgs({
            args: argv,
            allowPositionals: true,
            options: {
                series: { type: "string" },
                report: { type: "string" },
                figspec: { type: "string" },
                out: { type: "string" },
                help: { type: "boolean" },
            },
        }));
    } catch (error) {
        console.error(`${(error as Error).message}\n${USAGE}`);
        return 2;
    }
    if (values.help) {
        console.log(USAGE);
        return 0;
    }
    if (positionals[0] !== "render") {
        console.error(USAGE);
        return 2;
    }
    for (const key of ["series", "report", "figspec", "out"] as const) {
        if (typeof values[key] !== "string") {
            console.error(`missing --${key}\n${USAGE}`);
            return 2;
        }
    }
    try {
        const series = parseSeriesCsv(readFileSync(values.series as string, "utf8"));
        const report = parseReport(JSON.parse(readFileSync(values.report as string, "utf8")));
        const spec = parseFigureSpec(JSON.parse(readFileSync(values.figspec as string, "utf8")));
        const svg = buildFigure(series, report, spec);
        writeFileSync(values.out as string, svg + "\n");
        console.log(`wrote ${values.out}`);
        return 0;
    } catch (error) {
        if (error instanceof InputError) {
            console.error(`input error: ${error.message}`);
            return 1;
        }
        if (error instanceof SyntaxError || (error as NodeJS.ErrnoException).code) {
            console.error(`input error: ${(error as Error).message}`);
            return 1;
        }
        throw error;
    }
}

const invokedDirectly = (() => {
    if (!process.argv[1]) return false;
    try {
        return realpathSync(process.argv[1]) === fileURLToPath(import.meta.url);
    } catch {
        return false;
    }
})();
if (invokedDirectly) {
    process.exit(run(process.argv.slice(2)));
}
