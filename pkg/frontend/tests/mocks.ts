/**
 * Test doubles: a recording session API that mimics the engine's frame
 * responses, and activity fixtures for the editor view.
 */

import type { SessionEventBody } from '../src/api'
import type { SessionApi } from '../src/activityView'
import type {
  Activity,
  Actor,
  ComponentKind,
  FrameworkInfo,
  Mode,
  PushFrame,
} from '../src/types'
import { COMPONENT_ORDER } from '../src/types'

function allDelegatedTo(actor: Actor): Record<ComponentKind, Actor> {
  return {
    book_text: actor,
    question: actor,
    explanation: actor,
    motivation: actor,
  }
}

export function defaultDelegation(mode: Mode): Record<ComponentKind, Actor> {
  return allDelegatedTo(mode === 'parent_takeover' || mode === 'parent_led' ? 'parent' : 'robot')
}

export function makeFrame(overrides: Partial<PushFrame['state']> = {}, seq = 1): PushFrame {
  const mode = overrides.mode ?? 'robot_led'
  const state: PushFrame['state'] = {
    mode,
    delegation: defaultDelegation(mode),
    page_index: 1,
    component_index: 0,
    status: 'running',
    current_directive: {
      actor: defaultDelegation(mode).book_text,
      component: 'book_text',
      payload: { text: 'Two ducks paddle across the pond.' },
      page_index: 1,
    },
    ...overrides,
  }
  return { session_id: 'sim', seq, state }
}

/**
 * A one-page in-memory session: applies set_mode/set_delegation/next/
 * repeat just enough to produce realistic frames, and records every
 * request body it receives.
 */
export class MockSessionApi implements SessionApi {
  requests: SessionEventBody[] = []
  private seq: number
  private state: PushFrame['state']

  constructor(initialMode: Mode = 'robot_led') {
    this.state = makeFrame({ mode: initialMode }).state
    this.seq = 1
  }

  private frame(): PushFrame {
    return { session_id: 'sim', seq: this.seq, state: JSON.parse(JSON.stringify(this.state)) }
  }

  async sendEvent(_sessionId: string, event: SessionEventBody): Promise<PushFrame> {
    this.requests.push(event)
    this.seq += 1
    if (event.kind === 'set_mode') {
      const mode = event.args?.mode as Mode
      this.state.mode = mode
      this.state.delegation = defaultDelegation(mode)
    } else if (event.kind === 'set_delegation') {
      const component = event.args?.component as ComponentKind
      this.state.delegation[component] = event.args?.actor as Actor
    } else if (event.kind === 'next') {
      if (this.state.component_index < COMPONENT_ORDER.length - 1) {
        this.state.component_index += 1
      } else {
        this.state.status = 'completed'
        this.state.current_directive = null
        return this.frame()
      }
    }
    if (this.state.status === 'running') {
      const component = COMPONENT_ORDER[this.state.component_index]
      this.state.current_directive = {
        actor: this.state.delegation[component],
        component,
        payload: { text: `${component} payload` },
        page_index: this.state.page_index,
      }
    }
    return this.frame()
  }

  async getSession(_sessionId: string): Promise<PushFrame> {
    return this.frame()
  }
}

export function makeActivity(status: 'draft' | 'launched' = 'draft'): Activity {
  return {
    activity_id: 'act-1',
    book_id: 'single-page',
    subject: 'math',
    grade: 'preschool',
    status,
    pages: [
      {
        page_index: 1,
        concept_id: 'math.how-many',
        question: 'How many ducks can you find on this page?',
        choices: ['1', '3', '2', '4'],
        correct_index: 2,
        explanation: 'Count each duck.',
        motivation: 'Great counting!',
        provenance: {
          book_text: 'source_book',
          question: 'generated',
          explanation: 'generated',
          motivation: 'generated',
        },
      },
      {
        page_index: 2,
        concept_id: 'math.addition',
        question: 'Which number idea fits this page best?',
        choices: ['the red one', 'the blue one', 'the big one', 'the small one'],
        correct_index: 0,
        explanation: 'Talk it through together.',
        motivation: 'Wonderful thinking!',
        provenance: {
          book_text: 'source_book',
          question: 'generated',
          explanation: 'generated',
          motivation: 'parent_edited',
        },
      },
    ],
  }
}

export const MATH_FRAMEWORK: FrameworkInfo = {
  levels: [
    { ordinal: 1, label: 'Emerging' },
    { ordinal: 2, label: 'Developing' },
  ],
  concepts: [
    {
      id: 'math.how-many',
      level: 1,
      name: 'how many',
      description: 'Counting the objects in a small set.',
    },
    {
      id: 'math.addition',
      level: 2,
      name: 'addition',
      description: 'Combining two small sets and counting the total.',
    },
  ],
}
