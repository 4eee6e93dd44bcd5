/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_attackoutcome_free: (a: number, b: number) => void;
export const __wbg_demo_free: (a: number, b: number) => void;
export const attackoutcome_report: (a: number) => [number, number];
export const attackoutcome_rgba: (a: number) => [number, number];
export const demo_attack: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const demo_fromPgm: (a: number, b: number, c: number, d: number) => [number, number, number];
export const demo_height: (a: number) => number;
export const demo_layerRgba: (a: number, b: number, c: number) => [number, number, number, number];
export const demo_new: (a: number, b: number) => [number, number, number];
export const demo_referenceRgba: (a: number) => [number, number];
export const demo_regionRgba: (a: number, b: number, c: number) => [number, number, number, number];
export const demo_width: (a: number) => number;
export const inferImportance: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
