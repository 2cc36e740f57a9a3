/**
 * Wire types mirroring the service's JSON payloads.
 * The frontend consumes exactly these endpoints and push frames.
 */

export type Mode = 'parent_takeover' | 'parent_led' | 'robot_led' | 'robot_takeover'
export type Actor = 'parent' | 'robot'
export type ComponentKind = 'book_text' | 'question' | 'explanation' | 'motivation'
export type SessionStatus = 'running' | 'completed'
export type Provenance = 'generated' | 'parent_edited' | 'source_book'

export const COMPONENT_ORDER: ComponentKind[] = ['book_text', 'question', 'explanation', 'motivation']
export const LED_MODES: Mode[] = ['parent_led', 'robot_led']
export const TAKEOVER_MODES: Mode[] = ['parent_takeover', 'robot_takeover']

export interface Directive {
  actor: Actor
  component: ComponentKind
  payload: Record<string, unknown>
  page_index: number
}

export interface FrameState {
  mode: Mode
  delegation: Record<ComponentKind, Actor>
  page_index: number
  component_index: number
  status: SessionStatus
  current_directive: Directive | null
}

export interface PushFrame {
  session_id: string
  seq: number
  state: FrameState
}

export interface Concept {
  id: string
  level: number
  name: string
  description: string
}

export interface FrameworkInfo {
  levels: { ordinal: number; label: string }[]
  concepts: Concept[]
}

export interface ActivityPage {
  page_index: number
  concept_id: string
  question: string
  choices: string[]
  correct_index: number
  explanation: string
  motivation: string
  provenance: Record<string, Provenance>
}

export interface Activity {
  activity_id: string
  book_id: string
  subject: 'math' | 'literacy'
  grade: string
  status: 'draft' | 'launched'
  pages: ActivityPage[]
  derived_from?: string | null
}

export interface BookPage {
  text: string
  image_ref: string
}

export interface Book {
  book_id: string
  title: string
  pages: BookPage[]
}

export interface Recommendation {
  choice: Mode | 'avoid'
  tag: string
}
