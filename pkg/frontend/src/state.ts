/**
 * Builder state for the license chooser.
 *
 * The state machine owns the licensor's selection (rights + restrictions)
 * and mirrors everything derived — canonical expression, closure, license
 * preview, what-if verdicts — from the service. Per-right closures are
 * fetched once at startup and cached so the deselection dialog can name
 * which selected rights imply the right being removed; the cache holds
 * server results verbatim, nothing is recomputed client-side.
 *
 * Concurrent requests follow latest-wins per panel: a stale response never
 * overwrites the state produced by a newer interaction.
 */

import {
    ApiClient,
    ApiRequestError,
    CheckQuery,
    DecisionDoc,
    GenerateDoc,
    GrantDoc,
    ParseDoc,
    TaxonomyDoc,
} from './api.js';

export interface RestrictionSelection {
    attribution: boolean;
    confidential: boolean;
    noSublicense: boolean;
    parties: string[];
    exclude: string[];
}

export interface Selection {
    data: Set<string>;
    model: Set<string>;
    restrictions: RestrictionSelection;
}

export interface BuilderState {
    taxonomy: TaxonomyDoc | null;
    selection: Selection;
    canonical: string;
    closure: GrantDoc | null;
    preview: GenerateDoc | null;
    previewCorrected: boolean;
    decision: DecisionDoc | null;
    error: string | null;
    pending: { closure: boolean; preview: boolean; whatif: boolean };
}

export interface DeselectPrompt {
    token: string;
    implying: string[];
}

export function emptySelection(): Selection {
    return {
        data: new Set(),
        model: new Set(),
        restrictions: {
            attribution: false,
            confidential: false,
            noSublicense: false,
            parties: [],
            exclude: [],
        },
    };
}

function orderedTokens(selected: Set<string>, vocabulary: string[]): string[] {
    return vocabulary.filter((token) => selected.has(token));
}

/** Raw (non-canonical) expression for a selection; the server canonicalizes. */
export function selectionExpression(selection: Selection, taxonomy: TaxonomyDoc): string {
    const dataVocab = taxonomy.rights.filter((r) => r.family === 'data').map((r) => r.token);
    const modelVocab = taxonomy.rights.filter((r) => r.family === 'model').map((r) => r.token);
    const parts = ['MDL-1.0'];
    const data = orderedTokens(selection.data, dataVocab);
    if (data.length) parts.push(`data: ${data.join(', ')}`);
    const model = orderedTokens(selection.model, modelVocab);
    if (model.length) parts.push(`model: ${model.join(', ')}`);
    const r = selection.restrictions;
    const restrictions: string[] = [];
    if (r.parties.length) restrictions.push(`parties(${[...r.parties].sort().join('|')})`);
    if (r.noSublicense) restrictions.push('no-sublicense');
    if (r.attribution) restrictions.push('attribution');
    if (r.confidential) restrictions.push('confidential');
    if (r.exclude.length) restrictions.push(`exclude(${[...r.exclude].sort().join('|')})`);
    if (restrictions.length) parts.push(`restrictions: ${restrictions.join(', ')}`);
    return parts.join('; ');
}

/** Rebuild a selection from the server's stored-grant document. */
export function selectionFromGrant(grant: GrantDoc): Selection {
    const selection = emptySelection();
    for (const token of grant.data) selection.data.add(token);
    for (const token of grant.model) selection.model.add(token);
    for (const restriction of grant.restrictions) {
        switch (restriction.name) {
            case 'attribution':
                selection.restrictions.attribution = true;
                break;
            case 'confidential':
                selection.restrictions.confidential = true;
                break;
            case 'no-sublicense':
                selection.restrictions.noSublicense = true;
                break;
            case 'parties':
                selection.restrictions.parties = [...restriction.payload];
                break;
            case 'exclude':
                selection.restrictions.exclude = [...restriction.payload];
                break;
        }
    }
    return selection;
}

export function encodeHash(expression: string): string {
    return `#${encodeURIComponent(expression)}`;
}

export function decodeHash(hash: string): string | null {
    if (!hash || hash === '#') return null;
    const raw = hash.startsWith('#') ? hash.slice(1) : hash;
    try {
        return decodeURIComponent(raw);
    } catch {
        return null;
    }
}

type PanelName = 'closure' | 'preview' | 'whatif';

export class Builder {
    readonly state: BuilderState = {
        taxonomy: null,
        selection: emptySelection(),
        canonical: 'MDL-1.0',
        closure: null,
        preview: null,
        previewCorrected: false,
        decision: null,
        error: null,
        pending: { closure: false, preview: false, whatif: false },
    };

    private rightClosures = new Map<string, Set<string>>();
    private seq: Record<PanelName, number> = { closure: 0, preview: 0, whatif: 0 };

    constructor(
        private readonly api: ApiClient,
        private readonly onChange: (state: BuilderState) => void = () => {},
    ) {}

    private notify(): void {
        this.onChange(this.state);
    }

    /** Load the taxonomy and cache the server-computed closure of each right. */
    async init(): Promise<void> {
        this.state.taxonomy = await this.api.taxonomy();
        for (const right of this.state.taxonomy.rights) {
            const expression = `MDL-1.0; ${right.family}: ${right.token}`;
            const doc = await this.api.parse(expression);
            this.rightClosures.set(
                right.token,
                new Set([...doc.closure.data, ...doc.closure.model]),
            );
        }
        await this.refresh();
    }

    private get taxonomy(): TaxonomyDoc {
        if (!this.state.taxonomy) throw new Error('builder not initialized');
        return this.state.taxonomy;
    }

    expression(): string {
        return selectionExpression(this.state.selection, this.taxonomy);
    }

    /** Tokens the service reports in the closure but not explicitly selected. */
    impliedTokens(): string[] {
        const closure = this.state.closure;
        if (!closure) return [];
        const selected = new Set([...this.state.selection.data, ...this.state.selection.model]);
        return [...closure.data, ...closure.model].filter((token) => !selected.has(token));
    }

    selectedTokens(): Set<string> {
        return new Set([...this.state.selection.data, ...this.state.selection.model]);
    }

    private familyOf(token: string): 'data' | 'model' {
        const right = this.taxonomy.rights.find((r) => r.token === token);
        if (!right) throw new Error(`unknown right token: ${token}`);
        return right.family;
    }

    /**
     * Toggle a right. Selecting refreshes immediately and returns null.
     * Deselecting a right that other selected rights imply returns a
     * prompt (state unchanged) so the caller can ask which implying
     * rights to drop; resolve it with confirmDeselect.
     */
    async toggleRight(token: string): Promise<DeselectPrompt | null> {
        const family = this.familyOf(token);
        const set = family === 'data' ? this.state.selection.data : this.state.selection.model;
        if (!set.has(token)) {
            set.add(token);
            await this.refresh();
            return null;
        }
        const implying = [...this.selectedTokens()].filter(
            (other) => other !== token && (this.rightClosures.get(other)?.has(token) ?? false),
        );
        if (implying.length) {
            return { token, implying };
        }
        set.delete(token);
        await this.refresh();
        return null;
    }

    /** Drop the deselected right plus the chosen implying rights. */
    async confirmDeselect(prompt: DeselectPrompt, drop: string[] = prompt.implying): Promise<void> {
        for (const token of [prompt.token, ...drop]) {
            const family = this.familyOf(token);
            (family === 'data' ? this.state.selection.data : this.state.selection.model).delete(
                token,
            );
        }
        await this.refresh();
    }

    /** Attribution and confidentiality are mutually disabling toggles. */
    async toggleRestriction(
        kind: 'attribution' | 'confidential' | 'no-sublicense',
    ): Promise<void> {
        const r = this.state.selection.restrictions;
        if (kind === 'attribution') {
            r.attribution = !r.attribution;
            if (r.attribution) r.confidential = false;
        } else if (kind === 'confidential') {
            r.confidential = !r.confidential;
            if (r.confidential) r.attribution = false;
        } else {
            r.noSublicense = !r.noSublicense;
        }
        await this.refresh();
    }

    async setParties(parties: string[]): Promise<void> {
        this.state.selection.restrictions.parties = parties.filter((p) => p.trim().length > 0);
        await this.refresh();
    }

    async setExclusions(domains: string[]): Promise<void> {
        this.state.selection.restrictions.exclude = domains.filter((d) => d.trim().length > 0);
        await this.refresh();
    }

    /** Re-derive canonical form and closure from the service (latest wins). */
    async refresh(): Promise<void> {
        const ticket = ++this.seq.closure;
        this.state.pending.closure = true;
        this.notify();
        try {
            const doc: ParseDoc = await this.api.parse(this.expression());
            if (ticket !== this.seq.closure) return;
            this.state.canonical = doc.canonical;
            this.state.closure = doc.closure;
            this.state.error = null;
        } catch (err) {
            if (ticket !== this.seq.closure) return;
            // Keep the previous server-computed closure rather than guessing.
            this.state.error = err instanceof ApiRequestError ? err.message : String(err);
        } finally {
            if (ticket === this.seq.closure) {
                this.state.pending.closure = false;
                this.notify();
            }
        }
    }

    async previewLicense(corrected = false): Promise<void> {
        const ticket = ++this.seq.preview;
        this.state.pending.preview = true;
        this.notify();
        try {
            const doc = await this.api.generate(this.state.canonical, corrected);
            if (ticket !== this.seq.preview) return;
            this.state.preview = doc;
            this.state.previewCorrected = corrected;
            this.state.error = null;
        } catch (err) {
            if (ticket !== this.seq.preview) return;
            this.state.error = err instanceof ApiRequestError ? err.message : String(err);
        } finally {
            if (ticket === this.seq.preview) {
                this.state.pending.preview = false;
                this.notify();
            }
        }
    }

    async whatIfCheck(query: CheckQuery): Promise<DecisionDoc | null> {
        const ticket = ++this.seq.whatif;
        this.state.pending.whatif = true;
        this.notify();
        try {
            const decision = await this.api.check(this.state.canonical, query);
            if (ticket !== this.seq.whatif) return null;
            this.state.decision = decision;
            this.state.error = null;
            return decision;
        } catch (err) {
            if (ticket !== this.seq.whatif) return null;
            this.state.error = err instanceof ApiRequestError ? err.message : String(err);
            return null;
        } finally {
            if (ticket === this.seq.whatif) {
                this.state.pending.whatif = false;
                this.notify();
            }
        }
    }

    /** Replace the whole selection from an expression (URL hash, paste). */
    async loadExpression(expression: string): Promise<void> {
        const doc = await this.api.parse(expression);
        const selection = selectionFromGrant(doc.grant);
        this.state.selection = selection;
        this.state.canonical = doc.canonical;
        this.state.closure = doc.closure;
        this.state.error = null;
        this.state.preview = null;
        this.state.decision = null;
        this.notify();
    }

    shareHash(): string {
        return encodeHash(this.state.canonical);
    }

    /** Sidecar JSON for the current grant (canonical key order, trailing newline). */
    exportSidecar(licensorName: string, dataSource?: string): string {
        const doc: Record<string, unknown> = {
            schema_version: '1',
            expression: this.state.canonical,
            licensor: { name: licensorName },
        };
        if (dataSource) doc.data_source = dataSource;
        if (this.state.preview) doc.license_text_hash = this.state.preview.hash;
        return `${JSON.stringify(sortKeysDeep(doc), null, 2)}\n`;
    }
}

function sortKeysDeep(value: unknown): unknown {
    if (Array.isArray(value)) return value.map(sortKeysDeep);
    if (value && typeof value === 'object') {
        const entries = Object.entries(value as Record<string, unknown>).sort(([a], [b]) =>
            a < b ? -1 : a > b ? 1 : 0,
        );
        return Object.fromEntries(entries.map(([k, v]) => [k, sortKeysDeep(v)]));
    }
    return value;
}
