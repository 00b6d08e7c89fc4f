/**
 * DOM rendering for the builder. All derived content (implied rights,
 * canonical expression, license text, verdicts) is read from BuilderState,
 * which mirrors the service.
 */

import { DecisionDoc, RightInfo } from './api.js';
import { Builder, BuilderState, DeselectPrompt } from './state.js';
import { PRESETS } from './presets.js';

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Record<string, string> = {},
    ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        if (key === 'class') node.className = value;
        else node.setAttribute(key, value);
    }
    node.append(...children);
    return node;
}

function byId<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

export class BuilderView {
    constructor(private readonly builder: Builder) {}

    render(state: BuilderState): void {
        if (!state.taxonomy) return;
        this.renderError(state);
        this.renderRights(state);
        this.renderRestrictions(state);
        this.renderExpression(state);
        this.renderTopSheet(state);
        this.renderPreview(state);
        this.renderDecision(state.decision);
    }

    private renderError(state: BuilderState): void {
        const banner = byId<HTMLDivElement>('error-banner');
        if (state.error) {
            banner.replaceChildren(
                el('span', {}, `Service request failed: ${state.error} `),
                el('button', { id: 'retry', type: 'button' }, 'Retry'),
            );
            banner.hidden = false;
            byId<HTMLButtonElement>('retry').onclick = () => void this.builder.refresh();
        } else {
            banner.hidden = true;
            banner.replaceChildren();
        }
    }

    private rightButton(right: RightInfo): HTMLElement {
        const selected = this.builder.selectedTokens().has(right.token);
        const implied = this.builder.impliedTokens().includes(right.token);
        const classes = ['right-toggle'];
        if (selected) classes.push('selected');
        else if (implied) classes.push('implied');
        const badge = selected ? 'granted' : implied ? 'implied' : '';
        const button = el(
            'button',
            { class: classes.join(' '), type: 'button', title: right.definition },
            el('span', { class: 'right-name' }, right.name),
            badge ? el('span', { class: `badge ${badge}` }, badge) : '',
        );
        button.onclick = () => void this.onToggle(right.token);
        return button;
    }

    private async onToggle(token: string): Promise<void> {
        const prompt = await this.builder.toggleRight(token);
        if (prompt) this.showDeselectDialog(prompt);
    }

    private showDeselectDialog(prompt: DeselectPrompt): void {
        const names = new Map(
            (this.builder.state.taxonomy?.rights ?? []).map((r) => [r.token, r.name]),
        );
        const dialog = byId<HTMLDialogElement>('deselect-dialog');
        const list = byId<HTMLDivElement>('deselect-list');
        list.replaceChildren(
            el(
                'p',
                {},
                `"${names.get(prompt.token) ?? prompt.token}" is still implied by other selected rights. ` +
                    'Choose which implying rights to drop as well:',
            ),
            ...prompt.implying.map((token) =>
                el(
                    'label',
                    { class: 'deselect-option' },
                    Object.assign(el('input', { type: 'checkbox', value: token }), {
                        checked: true,
                    }),
                    ` ${names.get(token) ?? token}`,
                ),
            ),
        );
        byId<HTMLButtonElement>('deselect-confirm').onclick = () => {
            const drop = [...list.querySelectorAll<HTMLInputElement>('input:checked')].map(
                (input) => input.value,
            );
            dialog.close();
            void this.builder.confirmDeselect(prompt, drop);
        };
        byId<HTMLButtonElement>('deselect-cancel').onclick = () => dialog.close();
        dialog.showModal();
    }

    private renderRights(state: BuilderState): void {
        const taxonomy = state.taxonomy!;
        const dataPane = byId<HTMLDivElement>('data-rights');
        const modelPane = byId<HTMLDivElement>('model-rights');
        dataPane.replaceChildren(
            ...taxonomy.rights.filter((r) => r.family === 'data').map((r) => this.rightButton(r)),
        );
        modelPane.replaceChildren(
            ...taxonomy.rights.filter((r) => r.family === 'model').map((r) => this.rightButton(r)),
        );
    }

    private renderRestrictions(state: BuilderState): void {
        const r = state.selection.restrictions;
        const attribution = byId<HTMLInputElement>('restr-attribution');
        const confidential = byId<HTMLInputElement>('restr-confidential');
        attribution.checked = r.attribution;
        confidential.checked = r.confidential;
        // Mutually disabling: enabling one greys out the other.
        attribution.disabled = r.confidential;
        confidential.disabled = r.attribution;
        byId<HTMLInputElement>('restr-no-sublicense').checked = r.noSublicense;
        const parties = byId<HTMLInputElement>('restr-parties');
        if (document.activeElement !== parties) parties.value = r.parties.join(' | ');
        const exclude = byId<HTMLInputElement>('restr-exclude');
        if (document.activeElement !== exclude) exclude.value = r.exclude.join(' | ');
    }

    private renderExpression(state: BuilderState): void {
        byId<HTMLElement>('canonical-expression').textContent = state.canonical;
        window.history.replaceState(null, '', this.builder.shareHash());
    }

    private renderTopSheet(state: BuilderState): void {
        const taxonomy = state.taxonomy!;
        const container = byId<HTMLDivElement>('topsheet');
        const selected = this.builder.selectedTokens();
        const implied = new Set(this.builder.impliedTokens());
        const section = (family: 'data' | 'model', title: string) =>
            el(
                'div',
                { class: 'topsheet-section' },
                el('h3', {}, title),
                el(
                    'ul',
                    {},
                    ...taxonomy.rights
                        .filter((r) => r.family === family)
                        .map((r) => {
                            const status = selected.has(r.token)
                                ? 'granted'
                                : implied.has(r.token)
                                  ? 'implied'
                                  : 'excluded';
                            return el(
                                'li',
                                { class: `status-${status}` },
                                el('span', { class: 'right-name' }, r.name),
                                el('span', { class: `badge ${status}` }, status),
                            );
                        }),
                ),
            );
        container.replaceChildren(
            section('data', 'The Data itself'),
            section('model', 'Rights granted in conjunction with Models'),
        );
    }

    private renderPreview(state: BuilderState): void {
        const pane = byId<HTMLPreElement>('license-preview');
        pane.textContent = state.preview
            ? state.preview.text
            : 'Press "Preview license" to generate the license text.';
        byId<HTMLElement>('license-hash').textContent = state.preview
            ? `sha256 ${state.preview.hash}`
            : '';
    }

    private renderDecision(decision: DecisionDoc | null): void {
        const pane = byId<HTMLDivElement>('verdict-panel');
        if (!decision) {
            pane.replaceChildren(el('p', { class: 'muted' }, 'Run a what-if check to see a verdict.'));
            return;
        }
        const children: (Node | string)[] = [
            el('p', { class: `verdict verdict-${decision.verdict}` }, decision.verdict),
            el('p', {}, decision.reason),
        ];
        if (decision.obligations.length) {
            children.push(
                el('h4', {}, 'Obligations'),
                el(
                    'ul',
                    {},
                    ...decision.obligations.map((o) =>
                        el('li', {}, el('strong', {}, o.name), `: ${o.description}`),
                    ),
                ),
            );
        }
        if (decision.trace.length) {
            children.push(
                el('h4', {}, 'Justification'),
                el(
                    'ul',
                    {},
                    ...decision.trace.map((t) => el('li', {}, `${t.right} grants ${t.capability}`)),
                ),
            );
        }
        pane.replaceChildren(...children);
    }

    wire(): void {
        byId<HTMLInputElement>('restr-attribution').onchange = () =>
            void this.builder.toggleRestriction('attribution');
        byId<HTMLInputElement>('restr-confidential').onchange = () =>
            void this.builder.toggleRestriction('confidential');
        byId<HTMLInputElement>('restr-no-sublicense').onchange = () =>
            void this.builder.toggleRestriction('no-sublicense');
        byId<HTMLInputElement>('restr-parties').onchange = (event) =>
            void this.builder.setParties(
                (event.target as HTMLInputElement).value.split('|').map((s) => s.trim()),
            );
        byId<HTMLInputElement>('restr-exclude').onchange = (event) =>
            void this.builder.setExclusions(
                (event.target as HTMLInputElement).value.split('|').map((s) => s.trim()),
            );
        byId<HTMLButtonElement>('preview-button').onclick = () =>
            void this.builder.previewLicense(byId<HTMLInputElement>('corrected-toggle').checked);
        byId<HTMLButtonElement>('copy-expression').onclick = () =>
            void navigator.clipboard.writeText(this.builder.state.canonical);
        byId<HTMLButtonElement>('download-license').onclick = () => {
            const preview = this.builder.state.preview;
            if (preview) download('LICENSE.txt', preview.text);
        };
        byId<HTMLButtonElement>('download-sidecar').onclick = () => {
            const name = byId<HTMLInputElement>('licensor-name').value.trim() || 'Licensor';
            download('MDL.json', this.builder.exportSidecar(name));
        };
        byId<HTMLButtonElement>('load-expression').onclick = () => {
            const raw = byId<HTMLInputElement>('expression-input').value.trim();
            if (raw) void this.builder.loadExpression(raw);
        };

        const capability = byId<HTMLSelectElement>('whatif-capability');
        const asset = byId<HTMLSelectElement>('whatif-asset');
        const taxonomy = this.builder.state.taxonomy!;
        capability.replaceChildren(
            ...taxonomy.capabilities.map((c) => el('option', { value: c.token }, c.name)),
        );
        const syncAssets = () => {
            const info = taxonomy.capabilities.find((c) => c.token === capability.value);
            asset.replaceChildren(...(info?.assets ?? []).map((a) => el('option', { value: a }, a)));
        };
        capability.onchange = syncAssets;
        syncAssets();
        byId<HTMLButtonElement>('whatif-run').onclick = () =>
            void this.builder.whatIfCheck({
                capability: capability.value,
                asset: asset.value,
                actor: byId<HTMLInputElement>('whatif-actor').value.trim() || undefined,
                domain: byId<HTMLInputElement>('whatif-domain').value.trim() || undefined,
                sublicense: byId<HTMLInputElement>('whatif-sublicense').checked,
            });

        const presetPane = byId<HTMLDivElement>('preset-buttons');
        presetPane.replaceChildren(
            ...PRESETS.map((preset) => {
                const button = el('button', { class: 'preset', type: 'button' }, preset.label);
                button.onclick = () => void this.builder.whatIfCheck(preset.query);
                return button;
            }),
        );
    }
}

function download(filename: string, content: string): void {
    const blob = new Blob([content], { type: 'text/plain;charset=utf-8' });
    const url = URL.createObjectURL(blob);
    const anchor = document.createElement('a');
    anchor.href = url;
    anchor.download = filename;
    anchor.click();
    URL.revokeObjectURL(url);
}
