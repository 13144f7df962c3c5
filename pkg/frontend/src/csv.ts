/**
 * Series CSV access: header row of column names, numeric data columns.
 */

import Papa from "papaparse";

import { InputError } from "./types.js";

export class SeriesTable {
    readonly columns: string[];
    private readonly data: number[][];

    constructor(columns: string[], data: number[][]) {
        this.columns = columns;
        this.data = data;
    }

    get rowCount(): number {
        return this.data.length;
    }

    has(name: string): boolean {
        return this.columns.includes(name);
    }

    column(name: string): number[] {
        const index = this.columns.indexOf(name);
        if (index < 0) {
            throw new InputError(`column '${name}' not present in series header`);
        }
        return this.data.map((row) => row[index]);
    }
}

export function parseSeriesCsv(text: string): SeriesTable {
    const parsed = Papa.parse<(string | number)[]>(text.trim(), {
        dynamicTyping: true,
        skipEmptyLines: true,
    });
    if (parsed.errors.length > 0) {
        const first = parsed.errors[0];
        throw new InputError(`malformed series CSV: ${first.message} (row ${first.row})`);
    }
    const rows = parsed.data;
    if (rows.length < 3) {
        throw new InputError("series CSV needs a header and at least two samples");
    }
    const header = rows[0].map(String);
    if (header[0] !== "t") {
        throw new InputError(`series CSV must start with a 't' column, got '${header[0]}'`);
    }
    const data = rows.slice(1).map((row, i) => {
        if (row.length !== header.length) {
            throw new InputError(`row ${i + 2} has ${row.length} fields, expected ${header.length}`);
        }
        return row.map((cell) => {
            const value = typeof cell === "number" ? cell : Number(cell);
            if (!Number.isFinite(value)) {
                throw new InputError(`non-numeric value ${JSON.stringify(cell)} in row ${i + 2}`);
            }
            return value;
        });
    });
    return new SeriesTable(header, data);
}
