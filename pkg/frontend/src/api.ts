/**
 * Thin HTTP client for the paired service.
 *
 * The fetch implementation is injected so tests run against a mock and
 * the client stays free of browser globals.
 */

import type {
  Activity,
  Book,
  ComponentKind,
  FrameworkInfo,
  Mode,
  PushFrame,
  Recommendation,
} from './types'

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorType: string,
    detail: string,
    readonly report?: { issues: { code: string; message: string }[] },
  ) {
    super(detail)
  }
}

export interface SessionEventBody {
  kind: string
  args?: Record<string, unknown>
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init)
    const body = await response.json()
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? 'Error', body.detail ?? '', body.report)
    }
    return body as T
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(payload),
    })
  }

  listBooks(): Promise<Book[]> {
    return this.request('/books')
  }

  getFrameworks(): Promise<Record<string, FrameworkInfo>> {
    return this.request('/frameworks')
  }

  getActivity(activityId: string): Promise<Activity> {
    return this.request(`/activities/${activityId}`)
  }

  editComponent(activityId: string, pageIndex: number, component: ComponentKind, value: unknown): Promise<Activity> {
    return this.post(`/activities/${activityId}/pages/${pageIndex}/edit`, { component, value })
  }

  regeneratePage(activityId: string, pageIndex: number, scope: ComponentKind | 'all'): Promise<Activity> {
    return this.post(`/activities/${activityId}/pages/${pageIndex}/regenerate`, { scope })
  }

  changeConcept(activityId: string, pageIndex: number, conceptId: string): Promise<Activity> {
    return this.post(`/activities/${activityId}/pages/${pageIndex}/concept`, { concept_id: conceptId })
  }

  launchActivity(activityId: string): Promise<Activity> {
    return this.post(`/activities/${activityId}/launch`, {})
  }

  createSession(activityId: string, mode: Mode): Promise<PushFrame> {
    return this.post('/sessions', { activity_id: activityId, mode })
  }

  sendEvent(sessionId: string, event: SessionEventBody): Promise<PushFrame> {
    return this.post(`/sessions/${sessionId}/events`, event)
  }

  getSession(sessionId: string): Promise<PushFrame> {
    return this.request(`/sessions/${sessionId}`)
  }

  recommend(scenario: Record<string, unknown>): Promise<{ recommendations: Recommendation[] }> {
    return this.post('/recommend', { scenario })
  }

  streamUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${sessionId}/stream`
  }
}

/**
 * Incremental parser for a text/event-stream body. Feed it chunks as
 * they arrive; complete `data:` frames come back as parsed JSON.
 */
export class SseParser {
  private buffer = ''

  feed(chunk: string): PushFrame[] {
    this.buffer += chunk
    const frames: PushFrame[] = []
    let boundary = this.buffer.indexOf('\n\n')
    while (boundary >= 0) {
      const raw = this.buffer.slice(0, boundary)
      this.buffer = this.buffer.slice(boundary + 2)
      for (const line of raw.split('\n')) {
        if (line.startsWith('data: ')) {
          frames.push(JSON.parse(line.slice('data: '.length)))
        }
      }
      boundary = this.buffer.indexOf('\n\n')
    }
    return frames
  }
}
