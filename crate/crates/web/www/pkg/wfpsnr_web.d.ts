/* tslint:disable */
/* eslint-disable */

export class AttackOutcome {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Score report JSON; infinities appear as `"inf"`.
     */
    readonly report: string;
    readonly rgba: Uint8Array;
}

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    attack(kind: string, param: number, region: string, seed: number): AttackOutcome;
    /**
     * Session on a user-supplied binary PGM.
     */
    static fromPgm(bytes: Uint8Array, orientation_name: string): Demo;
    /**
     * `weights`, `saliency`, `edge`, `intensity` or `fuzzy` as RGBA.
     */
    layerRgba(name: string): Uint8Array;
    /**
     * Session on the bundled synthetic image.
     */
    constructor(orientation_name: string);
    referenceRgba(): Uint8Array;
    /**
     * Region mask (`important`, `non-important`, `all`) as RGBA.
     */
    regionRgba(name: string): Uint8Array;
    readonly height: number;
    readonly width: number;
}

/**
 * Crisp importance of one (saliency, edge, intensity) triple in `[0, 1]³`.
 */
export function inferImportance(saliency: number, edge: number, intensity: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_attackoutcome_free: (a: number, b: number) => void;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly attackoutcome_report: (a: number) => [number, number];
    readonly attackoutcome_rgba: (a: number) => [number, number];
    readonly demo_attack: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly demo_fromPgm: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly demo_height: (a: number) => number;
    readonly demo_layerRgba: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_new: (a: number, b: number) => [number, number, number];
    readonly demo_referenceRgba: (a: number) => [number, number];
    readonly demo_regionRgba: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_width: (a: number) => number;
    readonly inferImportance: (a: number, b: number, c: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
