/**
 * View model for the review/edit screen: book page on the left,
 * generated content blocks on the right, with per-block edit and
 * regenerate controls and a concept drop-down.
 */

import type { Activity, ActivityPage, ComponentKind, Concept, FrameworkInfo } from './types'

/** The slice of the HTTP client the editor view needs. */
export interface EditorApi {
  getActivity(activityId: string): Promise<Activity>
  getFrameworks(): Promise<Record<string, FrameworkInfo>>
  editComponent(activityId: string, pageIndex: number, component: ComponentKind, value: unknown): Promise<Activity>
  regeneratePage(activityId: string, pageIndex: number, scope: ComponentKind | 'all'): Promise<Activity>
  changeConcept(activityId: string, pageIndex: number, conceptId: string): Promise<Activity>
  launchActivity(activityId: string): Promise<Activity>
}

export interface EditorBlock {
  component: Exclude<ComponentKind, 'book_text'>
  text: string
  provenance: string
  editable: boolean
}

export class EditorViewModel {
  private activity: Activity | null = null
  private concepts: Concept[] = []
  private page = 1

  constructor(private readonly api: EditorApi) {}

  async bind(activityId: string): Promise<void> {
    this.activity = await this.api.getActivity(activityId)
    const frameworks = await this.api.getFrameworks()
    this.concepts = frameworks[this.activity.subject]?.concepts ?? []
    this.page = 1
  }

  get readOnly(): boolean {
    return this.activity?.status === 'launched'
  }

  get pageIndex(): number {
    return this.page
  }

  get pageCount(): number {
    return this.activity?.pages.length ?? 0
  }

  currentPage(): ActivityPage {
    if (this.activity === null) {
      throw new Error('editor is not bound to an activity')
    }
    const found = this.activity.pages.find((p) => p.page_index === this.page)
    if (!found) {
      throw new Error(`no page ${this.page}`)
    }
    return found
  }

  goToPage(pageIndex: number): void {
    if (pageIndex < 1 || pageIndex > this.pageCount) {
      throw new Error(`page ${pageIndex} out of range`)
    }
    this.page = pageIndex
  }

  /** The concept drop-down: every concept in the activity's framework. */
  conceptOptions(): Concept[] {
    return this.concepts
  }

  /** Info-hover text for a drop-down item: the description verbatim. */
  conceptInfo(conceptId: string): string {
    return this.concepts.find((c) => c.id === conceptId)?.description ?? ''
  }

  selectedConceptId(): string {
    return this.currentPage().concept_id
  }

  blocks(): EditorBlock[] {
    const page = this.currentPage()
    const editable = !this.readOnly
    return [
      {
        component: 'question',
        text: page.question,
        provenance: page.provenance['question'],
        editable,
      },
      {
        component: 'explanation',
        text: page.explanation,
        provenance: page.provenance['explanation'],
        editable,
      },
      {
        component: 'motivation',
        text: page.motivation,
        provenance: page.provenance['motivation'],
        editable,
      },
    ]
  }

  private requireWritable(): string {
    if (this.activity === null) {
      throw new Error('editor is not bound to an activity')
    }
    if (this.readOnly) {
      throw new Error('launched activities are read-only')
    }
    return this.activity.activity_id
  }

  async edit(component: ComponentKind, value: unknown): Promise<void> {
    const id = this.requireWritable()
    this.activity = await this.api.editComponent(id, this.page, component, value)
  }

  async regenerate(scope: ComponentKind | 'all'): Promise<void> {
    const id = this.requireWritable()
    this.activity = await this.api.regeneratePage(id, this.page, scope)
  }

  async selectConcept(conceptId: string): Promise<void> {
    const id = this.requireWritable()
    this.activity = await this.api.changeConcept(id, this.page, conceptId)
  }

  async launch(): Promise<void> {
    if (this.activity === null) {
      throw new Error('editor is not bound to an activity')
    }
    this.activity = await this.api.launchActivity(this.activity.activity_id)
  }
}
