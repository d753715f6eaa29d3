/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_platetrace_free: (a: number, b: number) => void;
export const fiberModulus: () => number;
export const modulusCurve: (a: number, b: number, c: number) => [number, number, number, number];
export const plateTrace: (a: number, b: number, c: number) => [number, number, number];
export const platetrace_no_fiber: (a: number) => [number, number];
export const platetrace_recovered: (a: number) => [number, number];
export const platetrace_s: (a: number) => [number, number];
export const platetrace_skipped: (a: number) => number;
export const platetrace_transferred: (a: number) => [number, number];
export const transferMatrix: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
