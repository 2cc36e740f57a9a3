import { describe, expect, it } from 'vitest'

import { EditorViewModel } from '../src/editorView'
import type { EditorApi } from '../src/editorView'
import type { Activity } from '../src/types'
import { MATH_FRAMEWORK, makeActivity } from './mocks'

interface Call {
  method: string
  args: unknown[]
}

function mockEditorApi(activity: Activity): { api: EditorApi; calls: Call[] } {
  const calls: Call[] = []
  let current = activity
  const record = (method: string, ...args: unknown[]): Activity => {
    calls.push({ method, args })
    return current
  }
  const api: EditorApi = {
    async getActivity(id) {
      return record('getActivity', id)
    },
    async getFrameworks() {
      calls.push({ method: 'getFrameworks', args: [] })
      return { math: MATH_FRAMEWORK }
    },
    async editComponent(id, page, component, value) {
      const updated = structuredClone(current)
      const target = updated.pages.find((p) => p.page_index === page)!
      if (component === 'motivation') {
        target.motivation = value as string
        target.provenance['motivation'] = 'parent_edited'
      }
      current = updated
      return record('editComponent', id, page, component, value)
    },
    async regeneratePage(id, page, scope) {
      return record('regeneratePage', id, page, scope)
    },
    async changeConcept(id, page, conceptId) {
      const updated = structuredClone(current)
      updated.pages.find((p) => p.page_index === page)!.concept_id = conceptId
      current = updated
      return record('changeConcept', id, page, conceptId)
    },
    async launchActivity(id) {
      current = { ...structuredClone(current), status: 'launched' }
      return record('launchActivity', id)
    },
  }
  return { api, calls }
}

async function boundEditor(status: 'draft' | 'launched' = 'draft') {
  const { api, calls } = mockEditorApi(makeActivity(status))
  const editor = new EditorViewModel(api)
  await editor.bind('act-1')
  calls.length = 0
  return { editor, calls }
}

describe('binding and navigation', () => {
  it('loads activity pages and framework concepts', async () => {
    const { editor } = await boundEditor()
    expect(editor.pageCount).toBe(2)
    expect(editor.conceptOptions().map((c) => c.id)).toEqual(['math.how-many', 'math.addition'])
  })

  it('concept info hover shows the description verbatim', async () => {
    const { editor } = await boundEditor()
    expect(editor.conceptInfo('math.addition')).toBe(
      'Combining two small sets and counting the total.',
    )
  })

  it('page navigation stays in range', async () => {
    const { editor } = await boundEditor()
    editor.goToPage(2)
    expect(editor.selectedConceptId()).toBe('math.addition')
    expect(() => editor.goToPage(0)).toThrow()
    expect(() => editor.goToPage(3)).toThrow()
  })
})

describe('edit and regenerate wiring', () => {
  it('regenerate on one block sends exactly one scoped request', async () => {
    const { editor, calls } = await boundEditor()
    await editor.regenerate('motivation')
    expect(calls).toEqual([{ method: 'regeneratePage', args: ['act-1', 1, 'motivation'] }])
  })

  it('regenerate-all uses the all scope', async () => {
    const { editor, calls } = await boundEditor()
    await editor.regenerate('all')
    expect(calls[0].args[2]).toBe('all')
  })

  it('selecting a concept sends one request and refreshes the page', async () => {
    const { editor, calls } = await boundEditor()
    await editor.selectConcept('math.addition')
    expect(calls).toEqual([{ method: 'changeConcept', args: ['act-1', 1, 'math.addition'] }])
    expect(editor.selectedConceptId()).toBe('math.addition')
  })

  it('an edit updates the block and its provenance', async () => {
    const { editor } = await boundEditor()
    await editor.edit('motivation', 'You are a star!')
    const block = editor.blocks().find((b) => b.component === 'motivation')!
    expect(block.text).toBe('You are a star!')
    expect(block.provenance).toBe('parent_edited')
  })
})

describe('launched activities', () => {
  it('render read-only with all controls disabled', async () => {
    const { editor } = await boundEditor('launched')
    expect(editor.readOnly).toBe(true)
    expect(editor.blocks().every((b) => !b.editable)).toBe(true)
  })

  it('refuse mutations without touching the network', async () => {
    const { editor, calls } = await boundEditor('launched')
    const attempts: [() => Promise<void>][] = [
      [() => editor.edit('motivation', 'x')],
      [() => editor.regenerate('all')],
      [() => editor.selectConcept('math.addition')],
    ]
    for (const [attempt] of attempts) {
      await expect(attempt()).rejects.toThrow('read-only')
    }
    expect(calls).toHaveLength(0)
  })

  it('launch flips the editor into read-only mode', async () => {
    const { editor } = await boundEditor()
    await editor.launch()
    expect(editor.readOnly).toBe(true)
  })
})
