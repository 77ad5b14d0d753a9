// Typed client for the annotation service. The workbench talks to the
// backend exclusively through these calls; it never reads files and
// never computes statistics of its own.

export interface LexemePayload {
  form: string;
  script: 'official-latin' | 'transliteration';
}

export interface EntryPayload {
  entry_id: string;
  gloss: string;
  translations: Record<string, LexemePayload[]>;
  completed_by: Record<string, boolean>;
  codes?: Record<string, string>;
}

export interface EntriesPage {
  dataset_id: string;
  page: number;
  page_size: number;
  total: number;
  entries: EntryPayload[];
}

export interface DatasetInfo {
  dataset_id: string;
  entries: number;
  annotators: string[];
}

export interface DiagnosticPayload {
  severity: string;
  code: string;
  message: string;
  entry_id: string | null;
  language: string | null;
  lexeme_index: number | null;
}

export interface SubmitResult {
  accepted: boolean;
  record?: Record<string, unknown>;
  diagnostics: DiagnosticPayload[];
}

export interface KappaPayload {
  n: number;
  p_o: number;
  p_o_exact: string;
  p_e: number;
  p_e_exact: string;
  kappa: number | null;
  se: number | null;
  ci95: [number, number] | null;
  degenerate: boolean;
}

export interface AgreementPayload {
  restricted: boolean;
  dataset_id: string;
  annotator_a: string;
  annotator_b: string;
  matrix: {
    categories: string[];
    counts: number[][];
    n: number;
    only_a: number;
    only_b: number;
  };
  kappa: KappaPayload | null;
  partition_agreement: Record<string, number> | null;
  empty_intersection: boolean;
  notes: string[];
}

export interface SuggestionPayload {
  dataset_id: string;
  entry_id: string;
  tau: number;
  metric: string;
  blocks: { language: string; lexeme_index: number }[][];
  classes: Record<string, number>;
}

export interface ProgressPayload {
  dataset_id: string;
  annotator_id: string;
  cursor: number;
  completed: number;
  total: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
  ) {
    super(`service returned ${status}`);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new ApiError(response.status, await response.json().catch(() => null));
  }
  return (await response.json()) as T;
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string, params?: Record<string, string | number | boolean | undefined>): string {
    const full = new URL(path, this.baseUrl);
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value !== undefined) full.searchParams.set(key, String(value));
    }
    return full.toString();
  }

  datasets(): Promise<{ datasets: DatasetInfo[] }> {
    return getJson(this.url('/datasets'));
  }

  entries(
    datasetId: string,
    options: { page?: number; pageSize?: number; filter?: string; annotator?: string } = {},
  ): Promise<EntriesPage> {
    return getJson(
      this.url(`/datasets/${encodeURIComponent(datasetId)}/entries`, {
        page: options.page,
        page_size: options.pageSize,
        filter: options.filter,
        annotator: options.annotator,
      }),
    );
  }

  async submit(record: {
    dataset_id: string;
    annotator_id: string;
    entry_id: string;
    language: string;
    lexeme_index: number;
    code: string;
  }): Promise<SubmitResult> {
    const response = await fetch(this.url('/annotations'), {
      method: 'PUT',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(record),
    });
    const body = (await response.json()) as SubmitResult;
    if (!response.ok && response.status !== 422) {
      throw new ApiError(response.status, body);
    }
    return body;
  }

  agreement(
    datasetId: string,
    annotatorA: string,
    annotatorB: string,
    restricted: boolean,
  ): Promise<AgreementPayload> {
    return getJson(
      this.url('/agreement', {
        dataset: datasetId,
        a: annotatorA,
        b: annotatorB,
        restricted,
      }),
    );
  }

  suggest(datasetId: string, entryId: string, tau?: number, metric?: string): Promise<SuggestionPayload> {
    return getJson(
      this.url('/suggest', { dataset: datasetId, entry_id: entryId, tau, metric }),
    );
  }

  progress(datasetId: string, annotatorId: string): Promise<ProgressPayload> {
    return getJson(
      this.url(`/progress/${encodeURIComponent(annotatorId)}`, { dataset: datasetId }),
    );
  }
}
