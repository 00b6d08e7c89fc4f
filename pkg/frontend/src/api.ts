/**
 * Typed client for the MDL /v1 HTTP API.
 *
 * The builder never derives closures, canonical forms, or verdicts itself;
 * everything displayed comes back from these endpoints.
 */

export interface RestrictionDoc {
    name: string;
    payload: string[];
}

export interface GrantDoc {
    data: string[];
    model: string[];
    restrictions: RestrictionDoc[];
}

export interface ParseDoc {
    canonical: string;
    grant: GrantDoc;
    closure: GrantDoc;
}

export interface RightInfo {
    token: string;
    name: string;
    family: 'data' | 'model';
    definition: string;
}

export interface CapabilityInfo {
    token: string;
    name: string;
    assets: string[];
}

export interface RestrictionInfo {
    token: string;
    name: string;
    takes_payload: boolean;
}

export interface TaxonomyDoc {
    version: string;
    rights: RightInfo[];
    edges: { from: string; to: string }[];
    capability_map: Record<string, string[]>;
    capabilities: CapabilityInfo[];
    restrictions: RestrictionInfo[];
}

export interface CheckQuery {
    capability: string;
    asset?: string;
    actor?: string;
    domain?: string;
    sublicense?: boolean;
}

export interface DecisionDoc {
    expression: string;
    query: { capability: string; asset: string; actor: string | null; domain: string | null; sublicense: boolean };
    verdict: 'permitted' | 'forbidden' | 'permitted-with-obligations';
    obligations: { name: string; description: string }[];
    trace: { right: string; capability: string }[];
    reason: string;
}

export interface GenerateDoc {
    text: string;
    hash: string;
}

export interface ApiErrorDoc {
    code: string;
    message: string;
    offset?: number;
    field?: string;
}

export class ApiRequestError extends Error {
    constructor(
        readonly status: number,
        readonly body: ApiErrorDoc | null,
        message: string,
    ) {
        super(message);
        this.name = 'ApiRequestError';
    }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    constructor(
        private readonly baseUrl: string = '',
        private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        let response: Response;
        try {
            response = await this.fetchFn(`${this.baseUrl}${path}`, init);
        } catch (err) {
            throw new ApiRequestError(0, null, `network failure: ${String(err)}`);
        }
        if (!response.ok) {
            let body: ApiErrorDoc | null = null;
            try {
                body = (await response.json()) as ApiErrorDoc;
            } catch {
                body = null;
            }
            const detail = body ? body.message : response.statusText;
            throw new ApiRequestError(response.status, body, `${response.status}: ${detail}`);
        }
        return (await response.json()) as T;
    }

    private post<T>(path: string, body: unknown): Promise<T> {
        return this.request<T>(path, {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify(body),
        });
    }

    taxonomy(): Promise<TaxonomyDoc> {
        return this.request<TaxonomyDoc>('/v1/taxonomy');
    }

    parse(expression: string): Promise<ParseDoc> {
        return this.post<ParseDoc>('/v1/parse', { expression });
    }

    generate(expression: string, corrected = false): Promise<GenerateDoc> {
        return this.post<GenerateDoc>('/v1/generate', { expression, corrected });
    }

    check(expression: string, query: CheckQuery): Promise<DecisionDoc> {
        return this.post<DecisionDoc>('/v1/check', { expression, query });
    }
}
